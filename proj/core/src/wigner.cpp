#include "fvcs/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fvcs/table.hpp"

namespace fvcs {

namespace {

constexpr double kFreeCutoff = 6.5;  // exp(-x^2) < 1e-18 beyond
constexpr int kFilonPanels = 1024;
constexpr int kMaxLevels = 400;

void check_spec(const GridSpec& s) {
  if (s.nq < 2 || s.np < 2) throw DomainError("grid needs at least 2 points per axis");
  if (!(s.q_max > s.q_min) || !(s.p_max > s.p_min)) throw DomainError("empty grid range");
}

void check_coverage(const GridSpec& s, double q0, double p0) {
  const double reach = kCoverageWidths * kPacketWidth;
  if (s.q_min > q0 - reach || s.q_max < q0 + reach || s.p_min > p0 - reach ||
      s.p_max < p0 + reach) {
    std::ostringstream os;
    os << "grid must cover the packet centre (" << q0 << ", " << p0 << ") +- " << reach;
    throw DomainError(os.str());
  }
}

nlohmann::json base_meta(const GridSpec& s, double lambda, std::complex<double> alpha) {
  return {
      {"lambda", lambda},
      {"alpha", {alpha.real(), alpha.imag()}},
      {"q", {{"min", s.q_min}, {"max", s.q_max}, {"count", s.nq}, {"step", s.dq()}}},
      {"p", {{"min", s.p_min}, {"max", s.p_max}, {"count", s.np}, {"step", s.dp()}}},
      {"units",
       {{"q", "sigma"},
        {"p", "hbar/sigma"},
        {"q_to_lambda_c", 1.0 / lambda},
        {"p_to_mc", lambda}}},
      {"columns", {"q", "p", "value"}},
      {"row_order", "p-major, q fastest"},
  };
}

}  // namespace

double free_q_tail_halfwidth(double lambda, double tol) {
  if (!(lambda > 0.0) || !(tol > 0.0 && tol < 1.0)) throw DomainError("need lambda > 0, 0 < tol < 1");
  return std::max(6.0, 0.5 * lambda * std::log(1.0 / tol) + 3.0);
}

GridSpec grid_around(double q0, double p0, double half_q, double half_p, double step) {
  if (!(step > 0.0) || !(half_q > 0.0) || !(half_p > 0.0)) {
    throw DomainError("grid half-widths and step must be > 0");
  }
  GridSpec s;
  const int hq = static_cast<int>(std::ceil(half_q / step));
  const int hp = static_cast<int>(std::ceil(half_p / step));
  s.q_min = q0 - hq * step;
  s.q_max = q0 + hq * step;
  s.nq = 2 * hq + 1;
  s.p_min = p0 - hp * step;
  s.p_max = p0 + hp * step;
  s.np = 2 * hp + 1;
  return s;
}

PhaseSpaceGrid wigner_free(const FreeState& state, const GridSpec& spec, unsigned threads,
                           double tol) {
  check_spec(spec);
  const double cq = std::numbers::sqrt2 * state.label.alpha.real();
  const double cp = std::numbers::sqrt2 * state.label.alpha.imag();
  check_coverage(spec, cq, cp);
  const double l2 = state.lambda * state.lambda;
  const double h = kFreeCutoff / kFilonPanels;
  const double pref = 2.0 / std::pow(std::numbers::pi, 1.5);

  PhaseSpaceGrid g;
  g.spec = spec;
  g.values = Eigen::MatrixXd::Zero(spec.np, spec.nq);
  std::vector<double> row_err(spec.np, 0.0);
  std::vector<std::vector<std::pair<int, int>>> row_flags(spec.np);

  parallel_for(spec.np, threads, [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    const double p = spec.p(j);
    // Even part of the ratio factor: (r^{1/4} + r^{-1/4})/2 = cosh(log(r)/4).
    std::vector<double> f(kFilonPanels + 1);
    std::vector<double> f2(kFilonPanels / 2 + 1);
    for (int i = 0; i <= kFilonPanels; ++i) {
      const double x = h * i;
      const double r = std::log1p(l2 * (p + x) * (p + x)) - std::log1p(l2 * (p - x) * (p - x));
      f[i] = std::cosh(0.25 * r) * std::exp(-x * x);
      if (i % 2 == 0) f2[i / 2] = f[i];
    }
    const double gauss = std::exp(-(p - cp) * (p - cp));
    for (int i = 0; i < spec.nq; ++i) {
      const double k = 2.0 * (spec.q(i) - cq);
      const double fine = filon_cos(f, h, k);
      const double coarse = filon_cos(f2, 2.0 * h, k);
      // Filon-Simpson is O(h^4): Richardson estimate of the fine-step error
      const double err = pref * gauss * std::abs(fine - coarse) / 15.0;
      g.values(j, i) = pref * gauss * fine;
      row_err[j] = std::max(row_err[j], err);
      if (err > tol) row_flags[j].emplace_back(i, j);
    }
  });

  for (int j = 0; j < spec.np; ++j) {
    g.err_estimate = std::max(g.err_estimate, row_err[j]);
    g.flagged.insert(g.flagged.end(), row_flags[j].begin(), row_flags[j].end());
  }
  g.meta = base_meta(spec, state.lambda, state.label.alpha);
  g.meta["kernel"] = "free";
  g.meta["quadrature"] = {{"rule", "filon-simpson"},
                          {"panels", kFilonPanels},
                          {"cutoff", kFreeCutoff},
                          {"tolerance", tol}};
  g.meta["err_estimate"] = g.err_estimate;
  g.meta["flagged_points"] = g.flagged.size();
  return g;
}

PhaseSpaceGrid wigner_rotator(const RotatorState& state, const GridSpec& spec, unsigned threads) {
  check_spec(spec);
  const std::complex<double> alpha = state.label.alpha;
  check_coverage(spec, std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag());
  const double a = std::norm(alpha);

  // Level cutoff: |z|^m/m! has decayed past e|z| + 25.
  double r_max = 0.0;
  for (double q : {spec.q_min, spec.q_max}) {
    for (double p : {spec.p_min, spec.p_max}) r_max = std::max(r_max, std::hypot(q, p));
  }
  auto levels_for = [&](double z_abs) {
    return static_cast<int>(std::ceil(std::numbers::e * z_abs)) + 25;
  };
  const int m_cap = std::min(kMaxLevels, levels_for(std::numbers::sqrt2 * r_max * std::abs(alpha)));

  // A(m, n) = eps(m, n) / ([eps(m)]! [eps(n)]!)
  const EpsTable eps(state.kind, m_cap);
  Eigen::MatrixXd A(m_cap + 1, m_cap + 1);
  for (int m = 0; m <= m_cap; ++m) {
    for (int n = 0; n <= m; ++n) {
      A(m, n) = eps_two_arg(state.kind, m, n) *
                std::exp(-eps.log_eps_factorial(m) - eps.log_eps_factorial(n));
      A(n, m) = A(m, n);
    }
  }

  PhaseSpaceGrid g;
  g.spec = spec;
  g.values = Eigen::MatrixXd::Zero(spec.np, spec.nq);
  std::vector<double> row_imag(spec.np, 0.0);
  std::vector<double> row_err(spec.np, 0.0);
  std::vector<std::vector<std::pair<int, int>>> row_flags(spec.np);

  parallel_for(spec.np, threads, [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    const double p = spec.p(j);
    std::vector<std::complex<double>> prev;
    std::vector<std::complex<double>> cur;
    for (int i = 0; i < spec.nq; ++i) {
      const double q = spec.q(i);
      const double r2 = q * q + p * p;
      const std::complex<double> z = std::numbers::sqrt2 * std::complex<double>(q, p) * std::conj(alpha);
      const std::complex<double> w = std::conj(z);
      const int levels = levels_for(std::abs(z));
      if (levels > m_cap && m_cap == kMaxLevels) row_flags[j].emplace_back(i, j);
      const int M = std::min(levels, m_cap);

      // C(0, n) = w^n / n!; C(m+1, n) = (z C(m, n) - a C(m, n-1)) / (m+1)
      prev.assign(M + 1, {0.0, 0.0});
      prev[0] = 1.0;
      for (int n = 1; n <= M; ++n) prev[n] = prev[n - 1] * w / static_cast<double>(n);
      CompensatedSum<std::complex<long double>> sum;
      long double abs_sum = 0.0L;
      for (int m = 0;; ++m) {
        for (int n = 0; n <= M; ++n) {
          const std::complex<double> term = A(m, n) * prev[n];
          sum.add(std::complex<long double>(term));
          abs_sum += std::abs(term);
        }
        if (m == M) break;
        cur.assign(M + 1, {0.0, 0.0});
        for (int n = 0; n <= M; ++n) {
          cur[n] = z * prev[n];
          if (n > 0) cur[n] -= a * prev[n - 1];
          cur[n] /= static_cast<double>(m + 1);
        }
        std::swap(prev, cur);
      }
      const double pref = std::exp(-r2 - a) / std::numbers::pi;
      const std::complex<double> value = pref * std::complex<double>(sum.value());
      g.values(j, i) = value.real();
      row_imag[j] = std::max(row_imag[j], std::abs(value.imag()));
      row_err[j] = std::max(
          row_err[j], pref * static_cast<double>(abs_sum) * 8.0 *
                          std::numeric_limits<double>::epsilon());
    }
  });

  for (int j = 0; j < spec.np; ++j) {
    g.max_imag = std::max(g.max_imag, row_imag[j]);
    g.err_estimate = std::max(g.err_estimate, row_err[j]);
    g.flagged.insert(g.flagged.end(), row_flags[j].begin(), row_flags[j].end());
  }
  g.meta = base_meta(spec, state.kind.lambda, alpha);
  g.meta["kernel"] = "rotator";
  g.meta["deformed"] = state.kind.deformed;
  g.meta["level_cutoff"] = m_cap;
  g.meta["max_imag"] = g.max_imag;
  g.meta["err_estimate"] = g.err_estimate;
  g.meta["flagged_points"] = g.flagged.size();
  return g;
}

Marginals marginals(const PhaseSpaceGrid& grid) {
  const auto& s = grid.spec;
  Marginals m;
  m.q_marginal.assign(s.nq, 0.0);
  m.p_marginal.assign(s.np, 0.0);
  CompensatedSum<long double> total;
  for (int i = 0; i < s.nq; ++i) {
    CompensatedSum<long double> acc;
    for (int j = 0; j < s.np; ++j) acc.add(grid.values(j, i));
    m.q_marginal[i] = static_cast<double>(acc.value()) * s.dp();
  }
  for (int j = 0; j < s.np; ++j) {
    CompensatedSum<long double> acc;
    for (int i = 0; i < s.nq; ++i) acc.add(grid.values(j, i));
    m.p_marginal[j] = static_cast<double>(acc.value()) * s.dq();
    total.add(m.p_marginal[j]);
  }
  m.total_mass = static_cast<double>(total.value()) * s.dp();
  return m;
}

Negativity negativity(const PhaseSpaceGrid& grid, double threshold) {
  const auto& s = grid.spec;
  Negativity n;
  n.min_value = grid.values.minCoeff();
  std::size_t count = 0;
  for (int j = 0; j < s.np; ++j) {
    for (int i = 0; i < s.nq; ++i) {
      if (grid.values(j, i) >= -threshold) continue;
      const double q = s.q(i);
      const double p = s.p(j);
      if (!n.any) {
        n.q_lo = n.q_hi = q;
        n.p_lo = n.p_hi = p;
        n.any = true;
      }
      n.q_lo = std::min(n.q_lo, q);
      n.q_hi = std::max(n.q_hi, q);
      n.p_lo = std::min(n.p_lo, p);
      n.p_hi = std::max(n.p_hi, p);
      ++count;
    }
  }
  n.negative_fraction = static_cast<double>(count) / (static_cast<double>(s.nq) * s.np);
  return n;
}

void write_grid_csv(const std::filesystem::path& path, const PhaseSpaceGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "q,p,value\n";
  for (int j = 0; j < grid.spec.np; ++j) {
    const std::string p = format_double(grid.spec.p(j));
    for (int i = 0; i < grid.spec.nq; ++i) {
      out << format_double(grid.spec.q(i)) << ',' << p << ',' << format_double(grid.values(j, i))
          << '\n';
    }
  }
  if (!out) throw Error("failed writing " + path.string());
}

void write_grid_meta(const std::filesystem::path& path, const PhaseSpaceGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << grid.meta.dump(2) << '\n';
}

}  // namespace fvcs
