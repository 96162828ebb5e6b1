#pragma once

// Nonlinear coherent states of the relativistic rotator, their Heisenberg
// dynamics, gyration-radius statistics and resolution-of-unity moments.
//
// Time is in 1/omega units. The rotator spectrum fixes hbar*omega/mc^2 =
// lambda^2, so a level gap E(n+1) - E(n) (in mc^2) is a frequency
// (E(n+1) - E(n))/lambda^2 in omega units.

#include <complex>
#include <span>
#include <vector>

#include "fvcs/spectrum.hpp"
#include "fvcs/table.hpp"

namespace fvcs {

struct RotatorState {
  CoherentLabel label;
  SpectrumKind kind;
  std::vector<std::complex<double>> coeffs;  ///< c_n, n = 0..n_max-1
  double norm = 1.0;                         ///< N(|alpha|^2)
  double tail = 0.0;                         ///< estimated sum_{n >= n_max} |c_n|^2

  int n_max() const { return static_cast<int>(coeffs.size()); }
};

inline constexpr double kTruncationTail = 1e-14;

/// c_n = alpha^n / (sqrt(n!) [eps(n)]!) / sqrt(N). Throws TruncationError
/// (with a suggested n_max) if the neglected weight exceeds tail_tol.
RotatorState build_state(const CoherentLabel& label, const SpectrumKind& kind, int n_max,
                         double tail_tol = kTruncationTail);

/// max over interior n of |([a] c)_n - alpha c_n|.
double eigen_residual(const RotatorState& state);

/// Series weights w_n = |alpha|^{2n} / (n! [eps^2(n)]! N) until the tail is
/// below tol; shared by the expectation-value formulas.
struct PoissonLikeWeights {
  std::vector<double> w;
  double tail = 0.0;
};
PoissonLikeWeights occupation_weights(const SpectrumKind& kind, double abs_alpha_sq,
                                      double tol = 1e-16);

/// Mean annihilator from the level-by-level series.
std::vector<std::complex<double>> evolve_mean_a(const RotatorState& state,
                                                std::span<const double> t, unsigned threads = 1);

/// First-correction closed form with the low-frequency envelope.
std::vector<std::complex<double>> evolve_mean_a_closed(const CoherentLabel& label, double lambda,
                                                       std::span<const double> t);

/// <2n+1> along the exact evolution of the truncated state vector.
std::vector<double> evolve_mean_R2(const RotatorState& state, std::span<const double> t);

struct RadiusStats {
  double mean_R2 = 0.0;        ///< 2|alpha|^2 (packet-centre radius squared)
  double expected_R2 = 0.0;    ///< <2n+1>
  double dispersion = 0.0;     ///< 1 - R^2 (1 - S/N)
  double err_estimate = 0.0;
};

RadiusStats radius_stats(const SpectrumKind& kind, double abs_alpha_sq,
                         const SeriesSpec& spec = {});

/// log(n! [eps^2(n)]!) for each n.
std::vector<double> unity_moments_log(const SpectrumKind& kind, std::span<const int> ns);

struct WeightCheck {
  std::vector<double> relative_errors;  ///< one per n = 0..n_max_check
  double max_relative_error = 0.0;
  bool negative_weight = false;         ///< W < 0 somewhere (not guaranteed positive)
};

/// Moments int x^n W(x) dx (Simpson on the uniform grid x_i = x0 + i h)
/// against n! [eps^2(n)]!. Throws ConvergenceError when the grid ends before
/// the integrand x^n W(x) has decayed.
WeightCheck verify_weight(std::span<const double> w, double x0, double h,
                          const SpectrumKind& kind, int n_max_check);

struct Fig3Preset {
  const char* name;
  double lambda;
  double q;  ///< dimensionless mean coordinate
  double p;  ///< dimensionless mean momentum
};

inline constexpr Fig3Preset kFig3Presets[] = {
    {"fig3a", 0.1, 0.5, 0.5},
    {"fig3b", 50.0, 0.5, 0.5},
    {"fig3c", 0.1, 2.0, 2.0},
    {"fig3d", 50.0, 2.0, 2.0},
};

/// Mean gyration radius sqrt(2)|a(t)|: classical (constant), nonlocal
/// (eps == 1) and standard columns.
Table fig3_data(double lambda, std::complex<double> alpha, std::span<const double> t, int n_max,
                unsigned threads = 1);

/// Gyration-radius dispersion (lambda_c^2) against omega (mc^2/hbar) for
/// mean radii (lambda_c); lambda = sqrt(omega), |alpha|^2 = R^2 omega / 2.
Table fig4_data(std::span<const double> omegas, std::span<const double> radii,
                unsigned threads = 1);

}  // namespace fvcs
