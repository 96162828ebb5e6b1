#include "fvcs/numerics.hpp"

#include <algorithm>
#include <exception>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fvcs {

RealResult integrate_gaussian(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  if (!(spec.width > 0.0)) throw DomainError("quadrature width must be > 0");
  if (!(spec.tol > 0.0)) throw DomainError("quadrature tolerance must be > 0");
  if (!(spec.rel_cutoff >= 8.0)) throw DomainError("quadrature cutoff must be >= 8 widths");

  using boost::math::quadrature::gauss_kronrod;
  const double a = spec.center - spec.rel_cutoff * spec.width;
  const double b = spec.center + spec.rel_cutoff * spec.width;

  // A shallow pass gives the L1 scale needed to turn the absolute tolerance
  // into Boost's relative termination criterion.
  double err = 0.0;
  double l1 = 0.0;
  gauss_kronrod<double, 61>::integrate(f, a, b, 3, 1e-3, &err, &l1);
  const double rel =
      std::max(spec.tol / std::max(l1, std::numeric_limits<double>::min()), 1e-15);

  const double value = gauss_kronrod<double, 61>::integrate(f, a, b, 18, rel, &err, &l1);
  if (!std::isfinite(value)) {
    throw ConvergenceError("integrand produced a non-finite value", value, err);
  }
  // Boost's estimate is the Gauss/Kronrod difference; values below the
  // floating-point floor of the integral are reported as that floor.
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() * l1;
  if (err > spec.tol && err > floor) {
    std::ostringstream os;
    os << "quadrature error estimate " << err << " exceeds tolerance " << spec.tol;
    throw ConvergenceError(os.str(), value, err);
  }
  return {value, std::min(err, spec.tol), Method::quadrature};
}

double simpson_sampled(std::span<const double> y, double h) {
  if (y.size() < 3 || y.size() % 2 == 0) {
    throw DomainError("Simpson rule needs an odd number (>= 3) of samples");
  }
  CompensatedSum<long double> s;
  const std::size_t last = y.size() - 1;
  s.add(y.front());
  s.add(y.back());
  for (std::size_t i = 1; i < last; ++i) s.add((i % 2 == 1 ? 4.0L : 2.0L) * y[i]);
  return static_cast<double>(s.value() * h / 3.0L);
}

namespace {

struct FilonWeights {
  double alpha, beta, gamma;
};

FilonWeights filon_weights(double theta) {
  if (std::abs(theta) < 1.0 / 6.0) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return {t3 * (2.0 / 45.0 - t2 * (2.0 / 315.0) + t2 * t2 * (2.0 / 4725.0)),
            2.0 / 3.0 + t2 * (2.0 / 15.0) - t2 * t2 * (4.0 / 105.0) + t2 * t2 * t2 * (2.0 / 567.0),
            4.0 / 3.0 - t2 * (2.0 / 15.0) + t2 * t2 * (1.0 / 210.0) - t2 * t2 * t2 * (1.0 / 11340.0)};
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  return {1.0 / theta + s * c / t2 - 2.0 * s * s / t3,
          2.0 * ((1.0 + c * c) / t2 - 2.0 * s * c / t3),
          4.0 * (s / t3 - c / t2)};
}

}  // namespace

double filon_cos(std::span<const double> g, double h, double k) {
  if (g.size() < 3 || g.size() % 2 == 0) {
    throw DomainError("Filon rule needs an odd number (>= 3) of samples");
  }
  const std::size_t last = g.size() - 1;
  const double b = static_cast<double>(last) * h;
  const auto w = filon_weights(k * h);

  CompensatedSum<long double> even;
  CompensatedSum<long double> odd;
  for (std::size_t i = 0; i <= last; ++i) {
    const double term = g[i] * std::cos(k * static_cast<double>(i) * h);
    if (i % 2 == 0) {
      even.add((i == 0 || i == last) ? 0.5 * term : term);
    } else {
      odd.add(term);
    }
  }
  // the lower-boundary sine term vanishes at x = 0
  const double boundary = g[last] * std::sin(k * b);
  return h * (w.alpha * boundary + w.beta * static_cast<double>(even.value()) +
              w.gamma * static_cast<double>(odd.value()));
}

QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite rule needs n >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = std::sqrt(0.5 * k);
    jacobi(k - 1, k) = off;
    jacobi(k, k - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = sqrt_pi * v0 * v0;
  }
  // Symmetrize so that nodes come in exact +/- pairs.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

void validate(const SeriesSpec& spec) {
  if (!(spec.tol > 0.0)) throw DomainError("series tolerance must be > 0");
  if (spec.max_terms < 1000) throw DomainError("series max_terms must be >= 1000");
  if (spec.max_order < 2) throw DomainError("series max_order must be >= 2");
}

double weniger_delta(std::span<const double> terms, int order) {
  if (order < 1 || terms.size() < static_cast<std::size_t>(order) + 2) {
    throw DomainError("weniger_delta needs order >= 1 and order + 2 terms");
  }
  constexpr long double beta = 1.0L;
  const int k = order;
  long double partial = 0.0L;
  CompensatedSum<long double> num;
  CompensatedSum<long double> den;
  long double binom = 1.0L;
  for (int j = 0; j <= k; ++j) {
    partial += terms[j];
    const long double omega = terms[j + 1];
    if (omega == 0.0L) throw DomainError("weniger_delta: zero remainder estimate");
    // (beta + j)_{k-1} / (beta + k)_{k-1}
    long double poch = 1.0L;
    for (int i = 0; i < k - 1; ++i) poch *= (beta + j + i) / (beta + k + i);
    const long double w = ((j % 2 == 0) ? 1.0L : -1.0L) * binom * poch;
    num.add(w * partial / omega);
    den.add(w / omega);
    binom = binom * (k - j) / (j + 1);
  }
  return static_cast<double>(num.value() / den.value());
}

namespace detail {

RealResult accelerate_weniger(const std::function<double(std::size_t)>& term,
                              const SeriesSpec& spec) {
  std::vector<double> terms;
  terms.reserve(spec.max_order + 2);
  for (int n = 0; n < spec.max_order + 2; ++n) {
    const double t = term(n);
    if (!std::isfinite(t) || t == 0.0) break;
    terms.push_back(t);
  }
  if (terms.size() < 4) {
    throw DivergenceError("too few usable terms for Weniger acceleration", 0.0,
                          std::numeric_limits<double>::infinity(), terms.size());
  }

  const int top = static_cast<int>(terms.size()) - 2;
  double prev = weniger_delta(terms, 1);
  double best = prev;
  double best_diff = std::numeric_limits<double>::infinity();
  double prev_diff = std::numeric_limits<double>::infinity();
  int rising = 0;
  for (int k = 2; k <= top; ++k) {
    const double cur = weniger_delta(terms, k);
    const double diff = std::abs(cur - prev);
    if (diff <= spec.tol && prev_diff <= spec.tol) {
      return {cur, std::max(diff, prev_diff), Method::series};
    }
    if (diff < best_diff) {
      best_diff = diff;
      best = cur;
      rising = 0;
    } else if (++rising >= 6) {
      break;
    }
    prev_diff = diff;
    prev = cur;
  }
  std::ostringstream os;
  os << "Weniger-accelerated series did not reach tolerance " << spec.tol
     << " (best successive-order difference " << best_diff << ")";
  throw DivergenceError(os.str(), best, best_diff, terms.size());
}

}  // namespace detail

double gen_binomial(double a, int k) {
  if (k < 0) throw DomainError("gen_binomial: k must be >= 0");
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r = r * (a - i) / (i + 1);
  return static_cast<double>(r);
}

double log_abs_gen_binomial(double a, int k) {
  if (k < 0) throw DomainError("log_abs_gen_binomial: k must be >= 0");
  long double s = 0.0L;
  for (int i = 0; i < k; ++i) {
    s += std::log(std::abs(static_cast<long double>(a) - i)) - std::log(static_cast<long double>(i + 1));
  }
  return static_cast<double>(s);
}

int gen_binomial_sign(double a, int k) {
  if (k < 0) throw DomainError("gen_binomial_sign: k must be >= 0");
  int sign = 1;
  for (int i = 0; i < k; ++i) {
    const double f = a - i;
    if (f == 0.0) return 0;
    if (f < 0.0) sign = -sign;
  }
  return sign;
}

double log_gamma_half(int k) {
  if (k < 0) throw DomainError("log_gamma_half: k must be >= 0");
  CompensatedSum<long double> s;
  s.add(0.5L * std::log(std::numbers::pi_v<long double>));
  for (int j = 1; j <= k; ++j) s.add(std::log(static_cast<long double>(j) - 0.5L));
  return static_cast<double>(s.value());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fvcs
