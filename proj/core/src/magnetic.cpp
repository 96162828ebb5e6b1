#include "fvcs/magnetic.hpp"

#include <numbers>
#include <sstream>

#include "fvcs/fock.hpp"
#include "fvcs/free_particle.hpp"
#include "fvcs/rotator.hpp"

namespace fvcs {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

std::vector<std::complex<double>> glauber_coefficients(std::complex<double> alpha, int n_max) {
  RotatorState s = build_state({alpha, Charge::positive}, SpectrumKind::rotator(1.0).undeformed(),
                               n_max);
  return s.coeffs;
}

void check_spec(const MagneticSpec& s) {
  if (!(s.lambda_r >= 0.0) || !(s.lambda_z >= 0.0)) {
    throw DomainError("lambda_r and lambda_z must be >= 0");
  }
  if (s.n_max < kMinFockTruncation) {
    throw DomainError("n_max below minimum " + std::to_string(kMinFockTruncation));
  }
  if (s.nodes < 1) throw DomainError("need at least one p_z node");
  if (s.n < 0 || s.n >= s.n_max) throw DomainError("Landau level outside the truncation");
}

}  // namespace

std::string_view to_string(MagneticVariant v) {
  switch (v) {
    case MagneticVariant::translational: return "translational";
    case MagneticVariant::rotational: return "rotational";
    case MagneticVariant::product: return "product";
    case MagneticVariant::mixed: return "mixed";
  }
  return "unknown";
}

std::vector<std::complex<double>> magnetic_coefficients(std::complex<double> alpha_r,
                                                        double lambda_r, double p_z, int n_max) {
  if (lambda_r == 0.0) return glauber_coefficients(alpha_r, n_max);
  return build_state({alpha_r, Charge::positive}, SpectrumKind::magnetic(lambda_r, p_z), n_max)
      .coeffs;
}

double MagneticState::norm() const {
  if (delta_normalized) {
    throw DomainError("state at a sharp p_z is delta-normalised and has no finite norm");
  }
  return amplitudes.squaredNorm();
}

std::vector<double> MagneticState::level_marginal() const {
  std::vector<double> m(amplitudes.rows());
  for (Eigen::Index n = 0; n < amplitudes.rows(); ++n) m[n] = amplitudes.row(n).squaredNorm();
  return m;
}

std::vector<double> MagneticState::momentum_marginal() const {
  std::vector<double> m(amplitudes.cols());
  for (Eigen::Index j = 0; j < amplitudes.cols(); ++j) m[j] = amplitudes.col(j).squaredNorm();
  return m;
}

MagneticState build_magnetic_state(const MagneticSpec& spec) {
  check_spec(spec);
  MagneticState st;
  st.spec = spec;

  if (spec.variant == MagneticVariant::rotational) {
    const auto c = magnetic_coefficients(spec.alpha_r, spec.lambda_r, spec.p_z, spec.n_max);
    st.p_nodes = {spec.lambda_z > 0.0 ? spec.p_z / spec.lambda_z : 0.0};
    st.p_z_mc = {spec.p_z};
    st.amplitudes = Eigen::Map<const Eigen::VectorXcd>(c.data(), spec.n_max);
    st.delta_normalized = true;
    return st;
  }

  // Standard coherent profile exp(-(p - c)^2/2 - i sqrt2 alpha_z' p) / pi^{1/4}
  // sampled at p_j = c + x_j with Gauss-Hermite nodes x_j.
  const auto rule = gauss_hermite_rule(spec.nodes);
  const double centre = std::numbers::sqrt2 * spec.alpha_z.imag();
  const int nodes = spec.nodes;
  std::vector<std::complex<double>> profile(nodes);
  st.p_nodes.resize(nodes);
  st.p_z_mc.resize(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double p = centre + rule.nodes[j];
    st.p_nodes[j] = p;
    st.p_z_mc[j] = spec.lambda_z * p;
    profile[j] = std::polar(std::sqrt(rule.weights[j] / kSqrtPi),
                            -std::numbers::sqrt2 * spec.alpha_z.real() * p);
  }

  st.amplitudes = Eigen::MatrixXcd::Zero(spec.n_max, nodes);
  switch (spec.variant) {
    case MagneticVariant::translational:
      for (int j = 0; j < nodes; ++j) st.amplitudes(spec.n, j) = profile[j];
      break;
    case MagneticVariant::product: {
      const auto c = glauber_coefficients(spec.alpha_r, spec.n_max);
      for (int j = 0; j < nodes; ++j) {
        for (int n = 0; n < spec.n_max; ++n) st.amplitudes(n, j) = c[n] * profile[j];
      }
      break;
    }
    case MagneticVariant::mixed:
      for (int j = 0; j < nodes; ++j) {
        const auto c = magnetic_coefficients(spec.alpha_r, spec.lambda_r, st.p_z_mc[j], spec.n_max);
        for (int n = 0; n < spec.n_max; ++n) st.amplitudes(n, j) = c[n] * profile[j];
      }
      break;
    case MagneticVariant::rotational:
      break;
  }
  return st;
}

double magnetic_eigen_residual(const MagneticState& state) {
  const int n_max = static_cast<int>(state.amplitudes.rows());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < state.amplitudes.cols(); ++j) {
    const double pz = state.p_z_mc[j];
    for (int n = 0; n < n_max - kBoundaryRows; ++n) {
      const double e = state.spec.lambda_r == 0.0
                           ? 1.0
                           : std::exp(log_eps(SpectrumKind::magnetic(state.spec.lambda_r, pz), n + 1));
      const std::complex<double> applied =
          std::sqrt(static_cast<double>(n + 1)) * e * state.amplitudes(n + 1, j);
      worst = std::max(worst, std::abs(applied - state.spec.alpha_r * state.amplitudes(n, j)));
    }
  }
  return worst;
}

std::vector<std::complex<double>> evolve_mean_ar(std::complex<double> alpha_r,
                                                 std::complex<double> alpha_z, double lambda_r,
                                                 double lambda_z, std::span<const double> t,
                                                 Charge charge) {
  const double a2 = std::norm(alpha_r);
  const double az2 = alpha_z.imag() * alpha_z.imag();
  const double lr2 = lambda_r * lambda_r;
  const double lz2 = lambda_z * lambda_z;
  const double lz4 = lz2 * lz2;
  const double sign = sign_of(charge);
  std::vector<std::complex<double>> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double tt = t[i] * t[i];
    const double spread = lz4 * tt / 4.0;  // lambda_z^4 omega^2 t^2 / 4
    const double s = std::sin(0.5 * lr2 * t[i]);
    const double log_env = -0.25 * std::log1p(spread) - 2.0 * a2 * s * s -
                           az2 * lz4 * tt / (2.0 + lz4 * tt / 2.0);
    const double phase = (1.0 - lr2) * t[i] - a2 * std::sin(lr2 * t[i]) -
                         az2 * lz2 * tt / (1.0 + spread) + 0.5 * std::atan(spread);
    out[i] = sign * alpha_r * std::polar(std::exp(log_env), -sign * phase);
  }
  return out;
}

std::vector<std::complex<double>> evolve_mean_ar(const MagneticState& state,
                                                 std::span<const double> t) {
  return evolve_mean_ar(state.spec.alpha_r, state.spec.alpha_z, state.spec.lambda_r,
                        state.spec.lambda_z, t, state.spec.charge);
}

double crossover_time(std::complex<double> alpha_r, std::complex<double> alpha_z,
                      double lambda_r, double lambda_z, double threshold, double t_max,
                      double dt) {
  if (!(threshold > 0.0) || !(dt > 0.0) || !(t_max > dt)) {
    throw DomainError("crossover scan needs threshold, dt > 0 and t_max > dt");
  }
  if (alpha_r == 0.0) throw DomainError("crossover needs alpha_r != 0");
  const CoherentLabel label{alpha_r, Charge::positive};
  auto deviation = [&](double t) {
    const double ts[] = {t};
    const auto a = evolve_mean_ar(alpha_r, alpha_z, lambda_r, lambda_z, ts)[0];
    const auto b = evolve_mean_a_closed(label, lambda_r, ts)[0];
    return std::abs(a / b - 1.0);
  };
  double lo = 0.0;
  double t = dt;
  while (t <= t_max) {
    if (deviation(t) > threshold) {
      double hi = t;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deviation(mid) > threshold ? hi : lo) = mid;
      }
      return hi;
    }
    lo = t;
    t += dt + 1e-3 * t;
  }
  std::ostringstream os;
  os << "envelope deviation stays below " << threshold << " up to t = " << t_max;
  throw ConvergenceError(os.str(), deviation(t_max), 0.0);
}

RealResult mean_vz(double p_z_mean, double lambda_z, double omega, double abs_alpha_r_sq) {
  if (!(omega >= 0.0)) throw DomainError("omega must be >= 0");
  const auto inv = inverse_effective_mass(lambda_z);
  return {p_z_mean * (inv.value - omega * (abs_alpha_r_sq + 0.5)),
          std::abs(p_z_mean) * inv.err_estimate, inv.method};
}

RealResult mean_vz(const MagneticState& state, double omega) {
  const double pz = state.spec.lambda_z * std::numbers::sqrt2 * state.spec.alpha_z.imag();
  return mean_vz(pz, state.spec.lambda_z, omega, std::norm(state.spec.alpha_r));
}

}  // namespace fvcs
