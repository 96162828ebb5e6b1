#pragma once

// Shared numerical kernels: Gaussian-weight quadrature, series summation with
// tail control, generalized binomials and half-integer gamma values.
//
// The quadrature and series engines are deliberately independent code paths;
// they are used to cross-check each other.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "fvcs/config.hpp"
#include "fvcs/errors.hpp"

namespace fvcs {

// ---------------------------------------------------------------------------
// Compensated (Neumaier) summation in long double.

template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <class T>
class CompensatedSum<std::complex<T>> {
 public:
  void add(std::complex<T> x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  std::complex<T> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<T> re_;
  CompensatedSum<T> im_;
};

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSpec {
  double center = 0.0;
  double width = 1.0;        ///< > 0
  double rel_cutoff = 12.0;  ///< support half-width in units of `width`, >= 8
  double tol = 1e-12;        ///< absolute
};

/// Integrates f over the real line. `f` carries its own Gaussian factor and is
/// only sampled on [center - rel_cutoff*width, center + rel_cutoff*width].
/// Throws ConvergenceError (with the best value) if `tol` is not reached.
RealResult integrate_gaussian(const std::function<double(double)>& f, const QuadratureSpec& spec);

/// Composite Simpson rule on equally spaced samples (odd count >= 3).
double simpson_sampled(std::span<const double> y, double h);

/// Filon–Simpson rule for \int_0^{2Nh} g(x) cos(k x) dx with g sampled at
/// x_i = i h, i = 0..2N. Exact in the oscillatory factor for any k.
double filon_cos(std::span<const double> g, double h, double k);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss–Hermite rule for weight exp(-x^2) (Golub–Welsch).
QuadratureRule gauss_hermite_rule(int n);

// ---------------------------------------------------------------------------
// Series

enum class Acceleration { none, weniger_delta };

struct SeriesSpec {
  double tol = 1e-12;                  ///< absolute tail tolerance
  std::size_t max_terms = 1'000'000;   ///< >= 1000
  std::size_t burn_in = 64;            ///< terms allowed to grow before the ratio guard arms
  bool ratio_guard = true;
  Acceleration acceleration = Acceleration::none;
  int max_order = 60;                  ///< highest Weniger transform order
};

void validate(const SeriesSpec& spec);

/// Weniger delta transformation delta_k^{(0)} of the partial sums of `terms`
/// with remainder estimates omega_j = a_{j+1}, beta = 1. Needs k + 2 terms.
double weniger_delta(std::span<const double> terms, int order);

namespace detail {

template <class T>
double magnitude(const T& x) {
  return static_cast<double>(std::abs(x));
}

template <class T>
bool finite(const T& x) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::isfinite(x);
  } else {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  }
}

RealResult accelerate_weniger(const std::function<double(std::size_t)>& term,
                              const SeriesSpec& spec);

}  // namespace detail

template <class F>
concept SeriesTerm = std::invocable<F, std::size_t> &&
                     (std::same_as<std::invoke_result_t<F, std::size_t>, double> ||
                      std::same_as<std::invoke_result_t<F, std::size_t>, std::complex<double>>);

/// Sums term(0) + term(1) + ... until the geometric tail bound
/// |t_n| r/(1-r) (r the last term ratio) falls below spec.tol on two
/// consecutive terms. err_estimate is that tail bound.
///
/// Throws DivergenceError when the term ratio reaches 1 after burn-in while
/// terms are still above tolerance, ConvergenceError when max_terms is hit.
/// With Acceleration::weniger_delta (real series only) a divergence hands the
/// terms to the Weniger delta transformation instead.
template <SeriesTerm F>
auto sum_series(F&& term, const SeriesSpec& spec)
    -> EvalResult<std::invoke_result_t<F, std::size_t>> {
  using Value = std::invoke_result_t<F, std::size_t>;
  using Wide = std::conditional_t<std::is_same_v<Value, double>, long double,
                                  std::complex<long double>>;
  validate(spec);

  CompensatedSum<Wide> acc;
  double last_nonzero = 0.0;
  int satisfied = 0;
  double tail = std::numeric_limits<double>::infinity();

  for (std::size_t n = 0; n < spec.max_terms; ++n) {
    const Value t = term(n);
    if (!detail::finite(t)) {
      std::ostringstream os;
      os << "series term " << n << " is not finite";
      throw DivergenceError(os.str(), std::complex<double>(acc.value()), tail, n);
    }
    acc.add(static_cast<Wide>(t));
    const double mag = detail::magnitude(t);

    double ratio = 0.0;
    if (mag > 0.0) {
      ratio = last_nonzero > 0.0 ? mag / last_nonzero : std::numeric_limits<double>::infinity();
      if (n == 0) ratio = std::numeric_limits<double>::infinity();
    }

    if (spec.ratio_guard && n >= spec.burn_in && last_nonzero > 0.0 && ratio >= 1.0 &&
        mag > spec.tol) {
      if constexpr (std::is_same_v<Value, double>) {
        if (spec.acceleration == Acceleration::weniger_delta) {
          return detail::accelerate_weniger(std::function<double(std::size_t)>(term), spec);
        }
      }
      std::ostringstream os;
      os << "series diverges: term ratio " << ratio << " >= 1 at index " << n;
      throw DivergenceError(os.str(), std::complex<double>(acc.value()), mag, n);
    }

    tail = (mag == 0.0) ? 0.0
           : (ratio < 1.0) ? mag * ratio / (1.0 - ratio)
                           : std::numeric_limits<double>::infinity();
    if (n > 0 && mag <= spec.tol && tail <= spec.tol) {
      if (++satisfied >= 2) {
        EvalResult<Value> r;
        r.value = static_cast<Value>(acc.value());
        r.err_estimate = tail;
        r.method = Method::series;
        return r;
      }
    } else {
      satisfied = 0;
    }
    if (mag > 0.0) last_nonzero = mag;
  }
  throw ConvergenceError("series did not converge within max_terms",
                         std::complex<double>(acc.value()), tail, spec.max_terms);
}

// ---------------------------------------------------------------------------
// Special values

/// binom(a, k) = a (a-1) ... (a-k+1) / k!.
double gen_binomial(double a, int k);

/// log|binom(a, k)|, valid for large k where the product form overflows.
double log_abs_gen_binomial(double a, int k);

/// Sign of binom(a, k) (0 when the coefficient vanishes).
int gen_binomial_sign(double a, int k);

/// log Gamma(k + 1/2) by the recursion Gamma(k+1/2) = (k-1/2) Gamma(k-1/2).
double log_gamma_half(int k);

// ---------------------------------------------------------------------------
// Deterministic parallel map: every index is evaluated exactly once and writes
// only its own output slot, so results do not depend on the thread count.

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fvcs
