#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "fvcs/fock.hpp"
#include "fvcs/free_particle.hpp"
#include "fvcs/magnetic.hpp"
#include "fvcs/rotator.hpp"
#include "fvcs/table.hpp"
#include "fvcs/wigner.hpp"
#include "fvcs_tools/app.hpp"

namespace fvcs::app {

namespace {

Check max_check(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured <= tol, measured, tol, std::move(detail)};
}

double gauss_dev(const PhaseSpaceGrid& g, double cq, double cp) {
  double worst = 0.0;
  for (int j = 0; j < g.spec.np; ++j) {
    for (int i = 0; i < g.spec.nq; ++i) {
      const double dq = g.spec.q(i) - cq, dp = g.spec.p(j) - cp;
      worst = std::max(worst, std::abs(g.values(j, i) - std::exp(-dq * dq - dp * dp) / std::numbers::pi));
    }
  }
  return worst;
}

void limits(const RunContext& ctx, std::vector<Check>& out) {
  const double l = 1e-6;
  const auto kind = SpectrumKind::rotator(l);
  double e = 0.0;
  for (int n = 1; n <= 1000; ++n) e = std::max(e, std::abs(eps_chi(kind, n).eps - 1.0));
  out.push_back(max_check("limits: eps(n) -> 1, n <= 1000", e, 1e-9));

  double coeff = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const std::complex<double> alpha = std::polar(a, 0.7);
    const auto s = build_state({alpha}, kind, 64);
    std::complex<double> g = std::exp(-0.5 * a * a);
    for (int n = 0; n < s.n_max(); ++n) {
      if (n > 0) g *= alpha / std::sqrt(static_cast<double>(n));
      coeff = std::max(coeff, std::abs(s.coeffs[n] - g));
    }
  }
  out.push_back(max_check("limits: coefficients -> Glauber, |alpha| <= 2", coeff, 1e-7));

  double dq = 0.0;
  for (double a : {0.0, 1.0, 3.0}) {
    dq = std::max(dq, std::abs(coord_dispersion(make_free_state({{0.0, a}}, l), ctx.params.tol_quad).value - 0.5));
  }
  out.push_back(max_check("limits: dq2 -> 1/2", dq, 1e-9));

  std::vector<double> t;
  for (int i = 0; i <= 200; ++i) t.push_back(2.0 * std::numbers::pi * i / 200);
  const CoherentLabel label{{1.0, 0.5}};
  const auto a = evolve_mean_a(build_state(label, kind, 32), t, ctx.threads);
  double dyn = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) dyn = std::max(dyn, std::abs(a[i] - label.alpha * std::polar(1.0, -t[i])));
  out.push_back(max_check("limits: a(t) -> alpha exp(-i omega t), one period", dyn, 1e-6));

  const std::complex<double> alpha(0.5, 1.0);
  const double cq = std::numbers::sqrt2 * alpha.real(), cp = std::numbers::sqrt2 * alpha.imag();
  const auto spec = grid_around(cq, cp, 4.5, 4.5, 0.1);
  const auto wf = wigner_free(make_free_state({alpha}, 1e-8), spec, ctx.threads);
  out.push_back(max_check("limits: free Wigner -> Gaussian", gauss_dev(wf, cq, cp), 1e-6));
  const auto wr = wigner_rotator(build_state({alpha}, SpectrumKind::rotator(1e-8), 32), spec, ctx.threads);
  out.push_back(max_check("limits: rotator Wigner -> Gaussian", gauss_dev(wr, cq, cp), 1e-6));
}

void series_vs_quad(const RunContext& ctx, std::vector<Check>& out, Table& cells) {
  cells.columns = {"lambda", "alpha_im", "quadrature", "series", "abs_diff"};
  double worst = 0.0;
  int converged = 0, divergent = 0;
  for (double l : {0.05, 0.1, 0.2, 0.3}) {
    for (double a : {0.25, 0.5, 1.0, 2.0}) {
      const auto s = make_free_state({{0.0, a}}, l);
      const double q = mean_velocity_quad(s, 1e-13).value;
      try {
        const double v = mean_velocity_series(s).value;
        worst = std::max(worst, std::abs(v - q));
        cells.add_row({l, a, q, v, std::abs(v - q)}, "ok");
        ++converged;
      } catch (const DivergenceError& e) {
        cells.add_row({l, a, q, std::nan(""), std::nan("")}, std::string("divergent: ") + e.what());
        ++divergent;
      }
    }
  }
  out.push_back(max_check("series-vs-quad: mean velocity, converged cells", worst, 1e-8,
                          std::to_string(converged) + " converged, " + std::to_string(divergent) +
                              " flagged divergent"));
  out.push_back({"series-vs-quad: all cells at lambda <= 0.1 converge", converged >= 8,
                 static_cast<double>(converged), 8.0, ""});

  double mass = 0.0;
  for (double l : {0.1, 0.2, 0.3}) {
    mass = std::max(mass, std::abs(inverse_effective_mass(l).value - inverse_effective_mass_quad(l).value));
  }
  out.push_back(max_check("series-vs-quad: 1/m* series vs quadrature", mass, 1e-8));
  (void)ctx;
}

void algebra(const RunContext& ctx, std::vector<Check>& out) {
  const double l = ctx.params.lambda;
  const int n = ctx.params.n_max;
  const auto kind = SpectrumKind::rotator(l);
  out.push_back(max_check("algebra: [[a],[a]^+] closed form", commutator_check_32(kind, n).max_deviation, 1e-10));
  out.push_back(max_check("algebra: [[x],[y]] closed form", commutator_check_32a(kind, n).max_deviation, 1e-10));
  const std::vector<double> pz{0.0, 0.25, 1.0, 3.0};
  const auto c38 = commutator_check_38(l, pz, n);
  out.push_back(max_check("algebra: [[z],[a]] vs finite differences", c38.max_deviation, 1e-6,
                          "fitted ratio to printed prefactor " + format_double(c38.fitted_prefactor_ratio)));
  out.push_back(max_check("algebra: [[z],[a]] vanishes at p_z = 0", c38.zero_pz_max, 0.0));
  double hyp = 0.0;
  for (const auto& k : {kind, SpectrumKind::magnetic(l, 0.5), SpectrumKind::magnetic(l, 2.0)}) {
    for (int m = 1; m <= 1000; ++m) {
      const auto ec = eps_chi(k, m);
      hyp = std::max(hyp, std::abs(ec.eps * ec.eps - ec.chi * ec.chi - 1.0));
    }
  }
  out.push_back(max_check("algebra: eps^2 - chi^2 = 1", hyp, 1e-12));
  out.push_back(max_check("algebra: U(n-1) U^-1(n) = eps + chi tau_1", R_transform_deviation(kind, n), 1e-12));
  const auto b = eps_factorial_bounds(kind);
  out.push_back({"algebra: [eps(n)]! bracketed by exp(pi^2 a/6), exp(pi^2 b/6)", b.bracketed,
                 std::exp(b.log_limit), 0.0,
                 "a=" + format_double(b.a) + " b=" + format_double(b.b)});
}

void wigner(const RunContext& ctx, std::vector<Check>& out) {
  double marg = 0.0, mass = 0.0;
  for (double l : {0.5, 2.0, 8.0}) {
    const double c = std::numbers::sqrt2 * 0.7;
    const double hq = free_q_tail_halfwidth(l);
    const int nq = 2 * static_cast<int>(std::ceil(hq / 0.5)) + 1;
    const auto g = wigner_free(make_free_state({{0.0, 0.7}}, l),
                               {-0.25 * (nq - 1), 0.25 * (nq - 1), nq, c - 6.0, c + 6.0, 121},
                               ctx.threads);
    const auto m = marginals(g);
    for (int j = 0; j < g.spec.np; ++j) {
      const double p = g.spec.p(j);
      marg = std::max(marg, std::abs(m.p_marginal[j] - std::exp(-(p - c) * (p - c)) / std::sqrt(std::numbers::pi)));
    }
    mass = std::max(mass, std::abs(m.total_mass - 1.0));
  }
  out.push_back(max_check("wigner: free momentum marginal is Gaussian", marg, 1e-6));
  out.push_back(max_check("wigner: free grid mass", mass, 1e-4));

  const auto g5 = wigner_free(make_free_state({{0.0, 1.0 / std::numbers::sqrt2}}, 8.0),
                              grid_around(0.0, 1.0, 5.0, 5.0, 0.1), ctx.threads);
  const auto n5 = negativity(g5);
  out.push_back({"wigner: free preset negative box contains origin", n5.box_contains(0.0, 0.0), n5.min_value, 0.0, ""});

  const std::complex<double> a6(std::numbers::sqrt2, std::numbers::sqrt2);
  const auto g6 = wigner_rotator(build_state({a6}, SpectrumKind::rotator(8.0), 64),
                                 grid_around(2.0, 2.0, 5.0, 5.0, 0.1), ctx.threads);
  const auto n6 = negativity(g6);
  out.push_back({"wigner: rotator preset negative box contains origin", n6.box_contains(0.0, 0.0), n6.min_value, 0.0,
                 "grid mass " + format_double(marginals(g6).total_mass) + " (reported, not asserted)"});
  out.push_back(max_check("wigner: rotator imaginary residue", g6.max_imag, 1e-10));
}

void moments(const RunContext&, std::vector<Check>& out) {
  const double h = 0.01;
  std::vector<double> w;
  for (int i = 0; i <= 16000; ++i) w.push_back(std::exp(-h * i));
  const auto plain = verify_weight(w, 0.0, h, SpectrumKind::rotator(1.0).undeformed(), 15);
  out.push_back(max_check("moments: exp(-x) reproduces n!, n <= 15", plain.max_relative_error, 1e-8));
  const auto deformed = verify_weight(w, 0.0, h, SpectrumKind::rotator(1.0), 15);
  out.push_back({"moments: exp(-x) misses n! [eps^2(n)]! at lambda = 1", deformed.max_relative_error > 1e-3,
                 deformed.max_relative_error, 1e-3, "gap reported, must be nonzero"});
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"limits", "series-vs-quad", "algebra", "wigner", "moments", "all"};
}

CommandResult run_verify(const std::string& suite, const RunContext& ctx) {
  const std::vector<std::string> all{"limits", "series-vs-quad", "algebra", "wigner", "moments"};
  std::vector<std::string> todo;
  if (suite == "all") {
    todo = all;
  } else if (std::find(all.begin(), all.end(), suite) != all.end()) {
    todo = {suite};
  } else {
    std::string known;
    for (const auto& s : verify_suites()) known += " " + s;
    throw UsageError("unknown verify suite '" + suite + "'; known:" + known);
  }

  CommandResult r;
  std::filesystem::create_directories(ctx.out_dir);
  for (const auto& s : todo) {
    std::vector<Check> out;
    try {
      if (s == "limits") limits(ctx, out);
      if (s == "algebra") algebra(ctx, out);
      if (s == "wigner") wigner(ctx, out);
      if (s == "moments") moments(ctx, out);
      if (s == "series-vs-quad") {
        Table cells;
        series_vs_quad(ctx, out, cells);
        write_csv(ctx.out_dir / "series_vs_quad.csv", cells);
        r.files.push_back("series_vs_quad.csv");
      }
    } catch (const Error& e) {
      out.push_back({s + ": aborted", false, std::nan(""), 0.0, e.what()});
    }
    r.checks.insert(r.checks.end(), out.begin(), out.end());
  }

  std::ofstream csv(ctx.out_dir / "checks.csv", std::ios::binary);
  csv << "check,passed,measured,tolerance\n";
  for (const auto& c : r.checks) {
    csv << '"' << c.name << "\"," << (c.passed ? 1 : 0) << ',' << format_double(c.measured) << ','
        << format_double(c.tolerance) << '\n';
  }
  r.files.push_back("checks.csv");
  return r;
}

}  // namespace fvcs::app
