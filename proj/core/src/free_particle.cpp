#include "fvcs/free_particle.hpp"

#include <numbers>
#include <sstream>

#include "fvcs/spectrum.hpp"

namespace fvcs {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be > 0");
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// lambda^{2k} C(-1/2, n+k) C(2(n+k)+1, 2k) Gamma(k+1/2)
double velocity_term(double log_lambda, int n, int k) {
  const int m = n + k;
  const double log_mag = 2.0 * k * log_lambda + log_abs_gen_binomial(-0.5, m) +
                         log_choose(2 * m + 1, 2 * k) + log_gamma_half(k);
  return (m % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
}

std::string describe(const std::exception& e) { return e.what(); }

}  // namespace

double FreeState::momentum_center() const { return std::numbers::sqrt2 * label.alpha.imag(); }

double FreeState::mean_momentum_mc() const { return lambda * momentum_center(); }

FreeState make_free_state(const CoherentLabel& label, double lambda) {
  check_lambda(lambda);
  if (!std::isfinite(label.alpha.real()) || !std::isfinite(label.alpha.imag())) {
    throw DomainError("alpha must be finite");
  }
  return {label, lambda};
}

FreeState free_state_from_means(double q_mean, double p_mean, double lambda, Charge charge) {
  check_lambda(lambda);
  PhysicalParams params;
  params.lambda = lambda;
  return make_free_state(label_from_means(q_mean, p_mean, params, charge), lambda);
}

RealResult free_norm(const FreeState& state, double tol) {
  const double c = state.momentum_center();
  // |Psi|^2 summed over both components: exp(-(p-c)^2)/sqrt(pi)
  auto f = [c](double p) { return std::exp(-(p - c) * (p - c)) / kSqrtPi; };
  return integrate_gaussian(f, {c, 1.0, 12.0, tol});
}

RealResult mean_velocity_quad(const FreeState& state, double tol) {
  const double c = state.momentum_center();
  const double l = state.lambda;
  auto f = [c, l](double p) {
    return p / std::sqrt(1.0 + l * l * p * p) * std::exp(-(p - c) * (p - c));
  };
  auto r = integrate_gaussian(f, {c, 1.0, 12.0, tol / (l / kSqrtPi)});
  r.value *= l / kSqrtPi;
  r.err_estimate *= l / kSqrtPi;
  return r;
}

RealResult mean_velocity_series(const FreeState& state, const SeriesSpec& spec) {
  validate(spec);
  const double a2 = state.label.alpha.imag();
  if (a2 == 0.0) return {0.0, 0.0, Method::series};
  const double l = state.lambda;
  const double log_l = std::log(l);
  const double x = 2.0 * a2 * a2 * l * l;  // (sqrt2 alpha'' lambda)^2

  double inner_err = 0.0;
  auto outer = [&](std::size_t n) -> double {
    const double weight = std::pow(x, static_cast<double>(n));
    if (weight == 0.0) return 0.0;
    auto inner = [&](std::size_t k) {
      return velocity_term(log_l, static_cast<int>(n), static_cast<int>(k));
    };
    const auto s = sum_series(inner, spec);
    inner_err += weight * s.err_estimate;
    return weight * s.value;
  };
  auto total = sum_series(outer, spec);
  const double pref = l * std::numbers::sqrt2 * a2 / kSqrtPi;
  return {pref * total.value, std::abs(pref) * (total.err_estimate + inner_err), Method::series};
}

SeriesSpec effective_mass_spec() {
  SeriesSpec s;
  s.tol = 1e-10;
  s.burn_in = 4;
  s.acceleration = Acceleration::weniger_delta;
  return s;
}

RealResult mean_velocity_leading(const FreeState& state, const SeriesSpec& spec) {
  const auto inv = inverse_effective_mass(state.lambda, spec);
  const double p = state.mean_momentum_mc();
  return {p * inv.value, std::abs(p) * inv.err_estimate, inv.method};
}

RealResult inverse_effective_mass(double lambda, const SeriesSpec& spec) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
  if (lambda == 0.0) return {1.0, 0.0, Method::closed_form};
  const double log_l = std::log(lambda);
  // (2/sqrt(pi)) lambda^{2n} C(-1/2, n) Gamma(n + 3/2)
  auto term = [log_l](std::size_t n) -> double {
    const int k = static_cast<int>(n);
    const double log_mag = std::log(2.0 / kSqrtPi) + 2.0 * k * log_l +
                           log_abs_gen_binomial(-0.5, k) + log_gamma_half(k + 1);
    return (k % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
  };
  try {
    return sum_series(term, spec);
  } catch (const DivergenceError& e) {
    std::ostringstream os;
    os << "effective-mass series does not converge at lambda = " << lambda << ": " << e.what();
    throw DivergenceError(os.str(), e.best_value(), e.err_estimate(), e.index());
  }
}

RealResult effective_mass(double lambda, const SeriesSpec& spec) {
  const auto inv = inverse_effective_mass(lambda, spec);
  const double m = 1.0 / inv.value;
  return {m, m * m * inv.err_estimate, inv.method};
}

RealResult inverse_effective_mass_quad(double lambda, double tol) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
  auto f = [lambda](double p) {
    return p * p * std::exp(-p * p) / std::sqrt(1.0 + lambda * lambda * p * p);
  };
  const double pref = 2.0 / kSqrtPi;
  auto r = integrate_gaussian(f, {0.0, 1.0, 12.0, tol / pref});
  r.value *= pref;
  r.err_estimate *= pref;
  return r;
}

RealResult coord_dispersion(const FreeState& state, double tol) {
  const double c = state.momentum_center();
  const double l = state.lambda;
  const double l2 = l * l;
  const double pref = l2 * l2 / (4.0 * kSqrtPi);
  auto f = [c, l2](double p) {
    const double d = 1.0 + l2 * p * p;
    return p * p / (d * d) * std::exp(-(p - c) * (p - c));
  };
  auto r = integrate_gaussian(f, {c, 1.0, 12.0, tol / pref});
  return {0.5 - pref * r.value, pref * r.err_estimate, Method::quadrature};
}

Table fig1_data(std::span<const double> lambdas, std::span<const double> p_grid, double tol,
                unsigned threads) {
  for (double l : lambdas) check_lambda(l);
  Table t;
  t.columns = {"p_mc", "v_classical"};
  for (double l : lambdas) t.columns.push_back("v_lambda_" + format_double(l));

  std::vector<std::vector<double>> rows(p_grid.size());
  std::vector<std::string> status(p_grid.size(), "ok");
  parallel_for(p_grid.size(), threads, [&](std::size_t i) {
    const double p = p_grid[i];
    std::vector<double> row{p, p / energy_free(p)};
    for (double l : lambdas) {
      try {
        // alpha'' = p/(sqrt2 lambda) so that the packet centre is p/lambda
        const auto s = make_free_state({{0.0, p / (std::numbers::sqrt2 * l)}}, l);
        row.push_back(mean_velocity_quad(s, tol).value);
      } catch (const Error& e) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        status[i] = "lambda=" + format_double(l) + ": " + describe(e);
      }
    }
    rows[i] = std::move(row);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) t.add_row(std::move(rows[i]), status[i]);
  return t;
}

Table fig2_data(std::span<const double> p_means, std::span<const double> dp_grid, double tol,
                unsigned threads) {
  for (double dp : dp_grid) {
    if (!(dp > 0.0)) throw DomainError("momentum dispersion must be > 0");
  }
  Table t;
  t.columns = {"dp_mc", "lambda", "dq_reference", "dq2_reference"};
  for (double p : p_means) t.columns.push_back("dq2_p_" + format_double(p));

  std::vector<std::vector<double>> rows(dp_grid.size());
  std::vector<std::string> status(dp_grid.size(), "ok");
  parallel_for(dp_grid.size(), threads, [&](std::size_t i) {
    const double dp = dp_grid[i];
    const double l = std::numbers::sqrt2 * dp;
    const double ref = 1.0 / (2.0 * dp);
    std::vector<double> row{dp, l, ref, ref * ref};
    for (double p : p_means) {
      try {
        const auto s = make_free_state({{0.0, p / (std::numbers::sqrt2 * l)}}, l);
        // sigma^2 = 1/lambda^2 converts to lambda_c^2
        row.push_back(coord_dispersion(s, tol).value / (l * l));
      } catch (const Error& e) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        status[i] = "p=" + format_double(p) + ": " + describe(e);
      }
    }
    rows[i] = std::move(row);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) t.add_row(std::move(rows[i]), status[i]);
  return t;
}

}  // namespace fvcs
