#include "fvcs/rotator.hpp"

#include <numbers>
#include <sstream>

#include "fvcs/fock.hpp"

namespace fvcs {

namespace {

// Running log(n! [eps^2(n)]!) for n = 0, 1, 2, ...
class LogWeightDenominator {
 public:
  explicit LogWeightDenominator(const SpectrumKind& kind) : kind_(kind) {}

  double at(int n) {
    while (static_cast<int>(values_.size()) <= n) {
      const int k = static_cast<int>(values_.size());
      values_.push_back(values_.back() + std::log(static_cast<double>(k)) +
                        2.0 * log_eps(kind_, k));
    }
    return values_[n];
  }

 private:
  SpectrumKind kind_;
  std::vector<double> values_{0.0};
};

void check_rotator(const SpectrumKind& kind) {
  if (!kind.discrete()) throw DomainError("rotator states need a discrete spectrum");
}

// Frequency (omega units) of the n -> n+1 transition.
double transition_frequency(const SpectrumKind& kind, int n) {
  return level_gap(kind, n) / (kind.lambda * kind.lambda);
}

}  // namespace

RotatorState build_state(const CoherentLabel& label, const SpectrumKind& kind, int n_max,
                         double tail_tol) {
  check_rotator(kind);
  if (n_max < kMinFockTruncation) {
    throw DomainError("n_max below minimum " + std::to_string(kMinFockTruncation));
  }
  const double a2 = std::norm(label.alpha);
  if (!std::isfinite(a2)) throw DomainError("alpha must be finite");

  RotatorState s;
  s.label = label;
  s.kind = kind;
  s.coeffs.assign(n_max, {0.0, 0.0});
  if (a2 == 0.0) {
    s.coeffs[0] = 1.0;
    return s;
  }

  SeriesSpec spec;
  spec.tol = 1e-15;
  s.norm = normalization(kind, a2, spec).value;
  const double log_a2 = std::log(a2);
  const double log_n = std::log(s.norm);
  const double theta = std::arg(label.alpha);
  LogWeightDenominator denom(kind);
  for (int n = 0; n < n_max; ++n) {
    const double log_mag = 0.5 * (n * log_a2 - denom.at(n) - log_n);
    s.coeffs[n] = std::polar(std::exp(log_mag), n * theta);
  }

  // Geometric tail from the first neglected weight.
  auto tail_from = [&](int n) {
    const double w = std::exp(n * log_a2 - denom.at(n) - log_n);
    const double r = a2 / ((n + 1) * std::exp(2.0 * log_eps(kind, n + 1)));
    return r < 1.0 ? w / (1.0 - r) : std::numeric_limits<double>::infinity();
  };
  s.tail = tail_from(n_max);
  if (s.tail > tail_tol) {
    int suggest = n_max;
    while (tail_from(suggest) > tail_tol && suggest < 1'000'000) suggest += 8;
    std::ostringstream os;
    os << "Fock truncation n_max = " << n_max << " leaves weight " << s.tail
       << " (> " << tail_tol << "); use n_max >= " << suggest;
    throw TruncationError(os.str(), suggest);
  }
  return s;
}

double eigen_residual(const RotatorState& state) {
  const FockMatrix a = deformed_annihilator(state.kind, state.n_max());
  Eigen::VectorXcd c(state.n_max());
  for (int n = 0; n < state.n_max(); ++n) c(n) = state.coeffs[n];
  const Eigen::VectorXcd r = a * c - state.label.alpha * c;
  return r.head(state.n_max() - kBoundaryRows).cwiseAbs().maxCoeff();
}

PoissonLikeWeights occupation_weights(const SpectrumKind& kind, double abs_alpha_sq,
                                      double tol) {
  check_rotator(kind);
  if (!(abs_alpha_sq >= 0.0) || !std::isfinite(abs_alpha_sq)) {
    throw DomainError("|alpha|^2 must be finite and >= 0");
  }
  PoissonLikeWeights out;
  if (abs_alpha_sq == 0.0) {
    out.w = {1.0};
    return out;
  }
  const double log_a2 = std::log(abs_alpha_sq);
  LogWeightDenominator denom(kind);
  // Work relative to the largest term to stay in range for large |alpha|.
  std::vector<double> logs;
  double peak = -std::numeric_limits<double>::infinity();
  for (int n = 0;; ++n) {
    const double lw = n * log_a2 - denom.at(n);
    logs.push_back(lw);
    peak = std::max(peak, lw);
    const double r = abs_alpha_sq / ((n + 1) * std::exp(2.0 * log_eps(kind, n + 1)));
    if (r < 0.5 && lw - peak < std::log(tol) - 2.0) break;
    if (n > 10'000'000) throw ConvergenceError("occupation weights do not decay", 0.0, 1.0, n);
  }
  CompensatedSum<long double> total;
  out.w.resize(logs.size());
  for (std::size_t n = 0; n < logs.size(); ++n) {
    out.w[n] = std::exp(logs[n] - peak);
    total.add(out.w[n]);
  }
  const double norm = static_cast<double>(total.value());
  for (double& w : out.w) w /= norm;
  out.tail = out.w.back();
  return out;
}

std::vector<std::complex<double>> evolve_mean_a(const RotatorState& state,
                                                std::span<const double> t, unsigned threads) {
  const auto weights = occupation_weights(state.kind, std::norm(state.label.alpha));
  const double sign = sign_of(state.label.charge);
  std::vector<double> freq(weights.w.size());
  for (std::size_t n = 0; n < freq.size(); ++n) {
    freq[n] = transition_frequency(state.kind, static_cast<int>(n));
  }
  std::vector<std::complex<double>> out(t.size());
  parallel_for(t.size(), threads, [&](std::size_t i) {
    CompensatedSum<std::complex<long double>> s;
    for (std::size_t n = 0; n < freq.size(); ++n) {
      const std::complex<double> ph = std::polar(weights.w[n], -sign * freq[n] * t[i]);
      s.add(std::complex<long double>(ph));
    }
    out[i] = sign * state.label.alpha * std::complex<double>(s.value());
  });
  return out;
}

std::vector<std::complex<double>> evolve_mean_a_closed(const CoherentLabel& label, double lambda,
                                                       std::span<const double> t) {
  const double a2 = std::norm(label.alpha);
  const double l2 = lambda * lambda;
  const double sign = sign_of(label.charge);
  std::vector<std::complex<double>> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = std::sin(0.5 * l2 * t[i]);
    const double envelope = std::exp(-2.0 * a2 * s * s);
    const double phase = (1.0 - l2) * t[i] - a2 * std::sin(l2 * t[i]);
    out[i] = sign * label.alpha * std::polar(envelope, -sign * phase);
  }
  return out;
}

std::vector<double> evolve_mean_R2(const RotatorState& state, std::span<const double> t) {
  const int n = state.n_max();
  Eigen::VectorXcd c(n);
  for (int k = 0; k < n; ++k) c(k) = state.coeffs[k];
  const Ladder l = ladder_matrices(n);
  const FockMatrix r2 = 2.0 * l.n_hat + FockMatrix::Identity(n, n);
  const double l2 = state.kind.lambda * state.kind.lambda;
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    Eigen::VectorXcd u(n);
    for (int k = 0; k < n; ++k) u(k) = std::polar(1.0, -energy(state.kind, k) / l2 * t[i]);
    const Eigen::VectorXcd psi = u.asDiagonal() * c;
    out[i] = (psi.adjoint() * r2 * psi)(0, 0).real();
  }
  return out;
}

RadiusStats radius_stats(const SpectrumKind& kind, double abs_alpha_sq, const SeriesSpec& spec) {
  check_rotator(kind);
  RadiusStats r;
  r.mean_R2 = 2.0 * abs_alpha_sq;
  if (abs_alpha_sq == 0.0) {
    r.expected_R2 = 1.0;
    r.dispersion = 1.0;
    return r;
  }
  const auto n = normalization(kind, abs_alpha_sq, spec);
  // S = sum |alpha|^{2n} / (n! [eps^2(n+1)]!)
  const double log_a2 = std::log(abs_alpha_sq);
  LogWeightDenominator denom(kind);
  auto term = [&](std::size_t k) -> double {
    const int m = static_cast<int>(k);
    return std::exp(m * log_a2 - denom.at(m) - 2.0 * log_eps(kind, m + 1));
  };
  const auto s = sum_series(term, spec);
  const double ratio = s.value / n.value;
  r.dispersion = 1.0 - r.mean_R2 * (1.0 - ratio);
  r.expected_R2 = 1.0 + r.mean_R2 * ratio;
  r.err_estimate = r.mean_R2 * (s.err_estimate + ratio * n.err_estimate) / n.value;
  return r;
}

std::vector<double> unity_moments_log(const SpectrumKind& kind, std::span<const int> ns) {
  check_rotator(kind);
  std::vector<double> out;
  out.reserve(ns.size());
  for (int n : ns) {
    if (n < 0) throw DomainError("moment order must be >= 0");
    out.push_back(std::lgamma(n + 1.0) + 2.0 * log_eps_factorial(kind, n));
  }
  return out;
}

WeightCheck verify_weight(std::span<const double> w, double x0, double h, const SpectrumKind& kind,
                          int n_max_check) {
  if (w.size() < 3 || w.size() % 2 == 0) {
    throw DomainError("weight grid needs an odd number (>= 3) of samples");
  }
  if (!(h > 0.0)) throw DomainError("weight grid step must be > 0");
  if (n_max_check < 0) throw DomainError("n_max_check must be >= 0");

  WeightCheck out;
  for (double v : w) out.negative_weight = out.negative_weight || v < 0.0;

  std::vector<int> ns(n_max_check + 1);
  for (int n = 0; n <= n_max_check; ++n) ns[n] = n;
  const auto targets = unity_moments_log(kind, ns);
  const double x_end = x0 + h * static_cast<double>(w.size() - 1);

  std::vector<double> f(w.size());
  for (int n = 0; n <= n_max_check; ++n) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      f[i] = std::pow(x0 + h * static_cast<double>(i), n) * w[i];
    }
    const double target = std::exp(targets[n]);
    // Integrand still sizeable at the end of the grid: the moment is cut off.
    const double edge = std::abs(f.back()) * x_end;
    if (edge > 1e-10 * target) {
      std::ostringstream os;
      os << "weight grid ends at x = " << x_end << " before x^" << n
         << " W(x) decays; extend the grid";
      throw ConvergenceError(os.str(), simpson_sampled(f, h), edge, n);
    }
    const double m = simpson_sampled(f, h);
    out.relative_errors.push_back(std::abs(m - target) / target);
  }
  out.max_relative_error =
      *std::max_element(out.relative_errors.begin(), out.relative_errors.end());
  return out;
}

Table fig3_data(double lambda, std::complex<double> alpha, std::span<const double> t, int n_max,
                unsigned threads) {
  const auto kind = SpectrumKind::rotator(lambda);
  const CoherentLabel label{alpha, Charge::positive};
  const auto standard = evolve_mean_a(build_state(label, kind, n_max), t, threads);
  const auto nonlocal = evolve_mean_a(build_state(label, kind.undeformed(), n_max), t, threads);
  const double classical = std::numbers::sqrt2 * std::abs(alpha);

  Table tab;
  tab.columns = {"t", "radius_classical", "radius_nonlocal", "radius_standard",
                 "a_standard_re", "a_standard_im"};
  for (std::size_t i = 0; i < t.size(); ++i) {
    tab.add_row({t[i], classical, std::numbers::sqrt2 * std::abs(nonlocal[i]),
                 std::numbers::sqrt2 * std::abs(standard[i]), standard[i].real(),
                 standard[i].imag()});
  }
  return tab;
}

Table fig4_data(std::span<const double> omegas, std::span<const double> radii, unsigned threads) {
  for (double w : omegas) {
    if (!(w > 0.0)) throw DomainError("cyclotron frequency must be > 0");
  }
  Table tab;
  tab.columns = {"omega", "lambda"};
  for (double r : radii) {
    tab.columns.push_back("dR2_standard_R_" + format_double(r));
    tab.columns.push_back("dR2_nonlocal_R_" + format_double(r));
  }
  std::vector<std::vector<double>> rows(omegas.size());
  std::vector<std::string> status(omegas.size(), "ok");
  parallel_for(omegas.size(), threads, [&](std::size_t i) {
    const double w = omegas[i];
    const double l = std::sqrt(w);
    const auto kind = SpectrumKind::rotator(l);
    std::vector<double> row{w, l};
    for (double r : radii) {
      const double a2 = 0.5 * r * r * w;  // R (lambda_c) = sqrt(2)|alpha| sigma
      for (const auto& k : {kind, kind.undeformed()}) {
        try {
          row.push_back(radius_stats(k, a2).dispersion / w);
        } catch (const Error& e) {
          row.push_back(std::numeric_limits<double>::quiet_NaN());
          status[i] = "R=" + format_double(r) + ": " + e.what();
        }
      }
    }
    rows[i] = std::move(row);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) tab.add_row(std::move(rows[i]), status[i]);
  return tab;
}

}  // namespace fvcs
