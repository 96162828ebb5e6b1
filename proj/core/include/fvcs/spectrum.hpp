#pragma once

// Energy spectra and the epsilon/chi deformation factors built from adjacent
// levels. Energies are in mc^2, momenta in mc.

#include <vector>

#include "fvcs/config.hpp"
#include "fvcs/numerics.hpp"

namespace fvcs {

enum class SpectrumTag { free, rotator, magnetic };

struct SpectrumKind {
  SpectrumTag tag = SpectrumTag::rotator;
  double lambda = 0.1;
  double p_z = 0.0;  ///< magnetic kind only
  /// false selects the "nonlocal" comparison: same energies, eps == 1, chi == 0.
  bool deformed = true;

  static SpectrumKind free(double lambda);
  static SpectrumKind rotator(double lambda);
  static SpectrumKind magnetic(double lambda, double p_z);

  SpectrumKind undeformed() const {
    SpectrumKind k = *this;
    k.deformed = false;
    return k;
  }
  bool discrete() const { return tag != SpectrumTag::free; }
};

/// E(n) for the discrete kinds. Throws DomainError for n < 0 or the free kind.
double energy(const SpectrumKind& kind, int n);
/// E(p) = sqrt(1 + p^2) of the free particle, p in mc.
double energy_free(double p);
/// E(n+1) - E(n) without cancellation.
double level_gap(const SpectrumKind& kind, int n);

struct EpsChi {
  double eps = 1.0;
  double chi = 0.0;
  int n = 1;
};

/// eps(n), chi(n) from the pair E(n-1), E(n). Requires n >= 1.
EpsChi eps_chi(const SpectrumKind& kind, int n);
/// log eps(n) evaluated without forming eps - 1 by subtraction.
double log_eps(const SpectrumKind& kind, int n);

/// [eps(n)]! = prod_{k=1}^n eps(k), with [eps(0)]! = 1.
double eps_factorial(const SpectrumKind& kind, int n);
double log_eps_factorial(const SpectrumKind& kind, int n);

/// eps(n, m) = (E(n) + E(m)) / (2 sqrt(E(n) E(m))).
double eps_two_arg(const SpectrumKind& kind, int n, int m);

/// Cumulative log eps(k) table, built once and read-only afterwards, so it is
/// safe to share between threads. Values are bit-identical to log_eps().
class EpsTable {
 public:
  EpsTable(const SpectrumKind& kind, int n_max);

  const SpectrumKind& kind() const { return kind_; }
  int n_max() const { return static_cast<int>(log_eps_.size()) - 1; }
  double log_eps(int n) const;            ///< 0 at n = 0
  double log_eps_factorial(int n) const;  ///< log [eps(n)]!
  double eps(int n) const { return std::exp(log_eps(n)); }

 private:
  SpectrumKind kind_;
  std::vector<double> log_eps_;
  std::vector<double> log_fact_;
};

struct AsymptoteCheck {
  double residual = 0.0;              ///< eps(n) - 1 - printed/n^2
  double printed_coefficient = 0.0;   ///< (5 lambda^4 + 3)/(128 lambda^4)
  double measured_coefficient = 0.0;  ///< n^2 (eps(n) - 1)
};

/// Compares eps(n) of the rotator with the large-n law 1 + c/n^2 using the
/// coefficient as printed in the source; also reports the measured c.
AsymptoteCheck eps_asymptote_check(double lambda, int n);

struct FactorialBounds {
  double a = 0.0;  ///< exp(a/n^2) < eps(n) on the fit range
  double b = 0.0;  ///< eps(n) < exp(b/n^2) on the fit range
  int n_fit = 0;
  double log_limit = 0.0;   ///< log lim [eps(n)]!, with tail estimate
  double tail = 0.0;        ///< estimated contribution beyond n_fit
  double lower_limit = 0.0; ///< exp(pi^2 a / 6)
  double upper_limit = 0.0; ///< exp(pi^2 b / 6)
  bool bracketed = false;
};

/// Fits the tightest a, b with exp(a/n^2) < eps(n) < exp(b/n^2) over
/// n in [1, n_fit] and brackets the limit of [eps(n)]!.
FactorialBounds eps_factorial_bounds(const SpectrumKind& kind, int n_fit = 10000);

/// N(|alpha|^2) = sum_n |alpha|^{2n} / (n! [eps^2(n)]!).
RealResult normalization(const SpectrumKind& kind, double abs_alpha_sq,
                         const SeriesSpec& spec = {});

}  // namespace fvcs
