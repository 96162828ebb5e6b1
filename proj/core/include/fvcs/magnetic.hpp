#pragma once

// Charged particle in a constant homogeneous magnetic field: rotational
// (Landau-level) and translational (along the field) degrees of freedom.
//
// States are stored fibred over a Gauss-Hermite grid in the dimensionless
// longitudinal momentum p (units hbar/sigma_z); p_z in mc is lambda_z * p.
// Entry (n, j) is the amplitude of |n> at node j with the square root of the
// quadrature weight folded in, so sum |entry|^2 is the norm.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fvcs/config.hpp"
#include "fvcs/numerics.hpp"

namespace fvcs {

enum class MagneticVariant {
  translational,  ///< |n> x |alpha_z>
  rotational,     ///< deformed coherent state at a fixed p_z (delta-normalised)
  product,        ///< |alpha_r> x |alpha_z>, undeformed rotational factor
  mixed,          ///< rotational states integrated against the alpha_z profile
};

std::string_view to_string(MagneticVariant v);

struct MagneticSpec {
  MagneticVariant variant = MagneticVariant::mixed;
  std::complex<double> alpha_r{0.0, 0.0};
  std::complex<double> alpha_z{0.0, 0.0};
  int n = 0;            ///< translational variant: Landau level
  double p_z = 0.0;     ///< rotational variant: longitudinal momentum (mc)
  double lambda_r = 0.1;
  double lambda_z = 0.1;
  int n_max = 64;
  int nodes = 48;       ///< Gauss-Hermite nodes for the alpha_z profile
  Charge charge = Charge::positive;
};

struct MagneticState {
  MagneticSpec spec;
  std::vector<double> p_nodes;  ///< dimensionless longitudinal momenta
  std::vector<double> p_z_mc;   ///< lambda_z * p_nodes (rotational: {p_z})
  Eigen::MatrixXcd amplitudes;  ///< n_max x nodes
  bool delta_normalized = false;

  /// Sum of |amplitude|^2; throws DomainError for delta-normalised states.
  double norm() const;
  /// Occupation of each Landau level, summed over p_z.
  std::vector<double> level_marginal() const;
  /// Weight of each p_z node, summed over levels.
  std::vector<double> momentum_marginal() const;
};

MagneticState build_magnetic_state(const MagneticSpec& spec);

/// Coefficient vector of the deformed coherent state at fixed p_z (mc).
std::vector<std::complex<double>> magnetic_coefficients(std::complex<double> alpha_r,
                                                        double lambda_r, double p_z, int n_max);

/// max over nodes and interior levels of |([a] psi)(n, j) - alpha_r psi(n, j)|
/// with [a] = b eps(n, p_z) acting fibre-wise.
double magnetic_eigen_residual(const MagneticState& state);

/// Closed-form mean rotational annihilator including the longitudinal
/// spreading factors; t in 1/omega units.
std::vector<std::complex<double>> evolve_mean_ar(std::complex<double> alpha_r,
                                                 std::complex<double> alpha_z, double lambda_r,
                                                 double lambda_z, std::span<const double> t,
                                                 Charge charge = Charge::positive);
std::vector<std::complex<double>> evolve_mean_ar(const MagneticState& state,
                                                 std::span<const double> t);

/// First time at which |a_r(t)/a_57(t) - 1| exceeds `threshold`, where a_57
/// is the rotator closed form with lambda = lambda_r. Coarse scan with step
/// dt up to t_max, then bisection. Throws ConvergenceError if never exceeded.
double crossover_time(std::complex<double> alpha_r, std::complex<double> alpha_z,
                      double lambda_r, double lambda_z, double threshold = 0.01,
                      double t_max = 1e6, double dt = 1e-2);

/// v_z = p_z [1/m*(lambda_z) - omega (|alpha_r|^2 + 1/2)], p_z in mc.
RealResult mean_vz(double p_z_mean, double lambda_z, double omega, double abs_alpha_r_sq);
RealResult mean_vz(const MagneticState& state, double omega);

}  // namespace fvcs
