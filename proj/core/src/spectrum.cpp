#include "fvcs/spectrum.hpp"

#include <algorithm>
#include <numbers>

namespace fvcs {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be > 0");
}

void check_discrete(const SpectrumKind& kind) {
  if (!kind.discrete()) {
    throw DomainError("the free spectrum is continuous and has no level index");
  }
}

// E^2 at a (possibly half-integer shifted) level.
double energy_sq(const SpectrumKind& kind, double n_plus_half) {
  return 1.0 + kind.p_z * kind.p_z + 2.0 * kind.lambda * kind.lambda * n_plus_half;
}

// u = (1/4) log(E^2(hi)/E^2(lo)) for levels lo < hi.
double half_log_ratio(const SpectrumKind& kind, int lo, int hi) {
  const double l2 = kind.lambda * kind.lambda;
  return 0.25 * std::log1p(2.0 * l2 * (hi - lo) / energy_sq(kind, lo + 0.5));
}

}  // namespace

SpectrumKind SpectrumKind::free(double lambda) {
  check_lambda(lambda);
  return {SpectrumTag::free, lambda, 0.0, true};
}

SpectrumKind SpectrumKind::rotator(double lambda) {
  check_lambda(lambda);
  return {SpectrumTag::rotator, lambda, 0.0, true};
}

SpectrumKind SpectrumKind::magnetic(double lambda, double p_z) {
  check_lambda(lambda);
  if (!std::isfinite(p_z)) throw DomainError("p_z must be finite");
  return {SpectrumTag::magnetic, lambda, p_z, true};
}

double energy(const SpectrumKind& kind, int n) {
  check_discrete(kind);
  if (n < 0) throw DomainError("energy level index must be >= 0");
  return std::sqrt(energy_sq(kind, n + 0.5));
}

double energy_free(double p) { return std::hypot(1.0, p); }

double level_gap(const SpectrumKind& kind, int n) {
  return 2.0 * kind.lambda * kind.lambda / (energy(kind, n + 1) + energy(kind, n));
}

EpsChi eps_chi(const SpectrumKind& kind, int n) {
  check_discrete(kind);
  if (n <= 0) throw DomainError("eps/chi need level index n >= 1");
  if (!kind.deformed) return {1.0, 0.0, n};
  const double u = half_log_ratio(kind, n - 1, n);
  return {std::cosh(u), -std::sinh(u), n};
}

double log_eps(const SpectrumKind& kind, int n) {
  check_discrete(kind);
  if (n <= 0) throw DomainError("eps/chi need level index n >= 1");
  if (!kind.deformed) return 0.0;
  const double s = std::sinh(0.5 * half_log_ratio(kind, n - 1, n));
  return std::log1p(2.0 * s * s);
}

double log_eps_factorial(const SpectrumKind& kind, int n) {
  check_discrete(kind);
  if (n < 0) throw DomainError("eps factorial needs n >= 0");
  CompensatedSum<long double> s;
  for (int k = 1; k <= n; ++k) s.add(log_eps(kind, k));
  return static_cast<double>(s.value());
}

double eps_factorial(const SpectrumKind& kind, int n) {
  return std::exp(log_eps_factorial(kind, n));
}

double eps_two_arg(const SpectrumKind& kind, int n, int m) {
  check_discrete(kind);
  if (n < 0 || m < 0) throw DomainError("eps(n, m) needs n, m >= 0");
  if (!kind.deformed || n == m) return 1.0;
  return std::cosh(half_log_ratio(kind, std::min(n, m), std::max(n, m)));
}

EpsTable::EpsTable(const SpectrumKind& kind, int n_max) : kind_(kind) {
  check_discrete(kind);
  if (n_max < 0) throw DomainError("EpsTable needs n_max >= 0");
  log_eps_.assign(n_max + 1, 0.0);
  log_fact_.assign(n_max + 1, 0.0);
  CompensatedSum<long double> s;
  for (int k = 1; k <= n_max; ++k) {
    log_eps_[k] = fvcs::log_eps(kind, k);
    s.add(log_eps_[k]);
    log_fact_[k] = static_cast<double>(s.value());
  }
}

double EpsTable::log_eps(int n) const {
  if (n < 0 || n > n_max()) throw DomainError("EpsTable index out of range");
  return log_eps_[n];
}

double EpsTable::log_eps_factorial(int n) const {
  if (n < 0 || n > n_max()) throw DomainError("EpsTable index out of range");
  return log_fact_[n];
}

AsymptoteCheck eps_asymptote_check(double lambda, int n) {
  if (n < 10) throw DomainError("asymptote check needs n >= 10");
  const auto kind = SpectrumKind::rotator(lambda);
  const double l4 = std::pow(lambda, 4);
  const double s = std::sinh(0.5 * half_log_ratio(kind, n - 1, n));
  const double eps_minus_one = 2.0 * s * s;  // cosh u - 1
  const double nn = static_cast<double>(n) * n;
  AsymptoteCheck r;
  r.printed_coefficient = (5.0 * l4 + 3.0) / (128.0 * l4);
  r.residual = eps_minus_one - r.printed_coefficient / nn;
  r.measured_coefficient = eps_minus_one * nn;
  return r;
}

FactorialBounds eps_factorial_bounds(const SpectrumKind& kind, int n_fit) {
  check_discrete(kind);
  if (n_fit < 10) throw DomainError("factorial bounds need n_fit >= 10");
  double gmin = std::numeric_limits<double>::infinity();
  double gmax = -gmin;
  CompensatedSum<long double> sum;
  double g_last = 0.0;
  for (int k = 1; k <= n_fit; ++k) {
    const double le = log_eps(kind, k);
    sum.add(le);
    const double g = le * static_cast<double>(k) * k;
    gmin = std::min(gmin, g);
    gmax = std::max(gmax, g);
    g_last = g;
  }
  const double margin = 1e-12 * std::max(1.0, std::abs(gmax));
  FactorialBounds r;
  r.n_fit = n_fit;
  r.a = gmin - margin;
  r.b = gmax + margin;
  // log eps(k) ~ g_last / k^2 beyond the fit range
  r.tail = g_last / n_fit;
  r.log_limit = static_cast<double>(sum.value()) + r.tail;
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  r.lower_limit = std::exp(zeta2 * r.a);
  r.upper_limit = std::exp(zeta2 * r.b);
  const double limit = std::exp(r.log_limit);
  r.bracketed = r.lower_limit < limit && limit < r.upper_limit;
  return r;
}

RealResult normalization(const SpectrumKind& kind, double abs_alpha_sq, const SeriesSpec& spec) {
  check_discrete(kind);
  if (!(abs_alpha_sq >= 0.0) || !std::isfinite(abs_alpha_sq)) {
    throw DomainError("|alpha|^2 must be finite and >= 0");
  }
  if (abs_alpha_sq == 0.0) return {1.0, 0.0, Method::series};

  const double log_x = std::log(abs_alpha_sq);
  // Terms are requested in order; the running log-factorials follow them.
  std::vector<double> log_fact{0.0};
  auto term = [&](std::size_t n) -> double {
    while (log_fact.size() <= n) {
      const int k = static_cast<int>(log_fact.size());
      log_fact.push_back(log_fact.back() + std::log(static_cast<double>(k)) + 2.0 * log_eps(kind, k));
    }
    return std::exp(static_cast<double>(n) * log_x - log_fact[n]);
  };
  return sum_series(term, spec);
}

}  // namespace fvcs
