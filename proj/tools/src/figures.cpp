#include <cmath>
#include <numbers>

#include "fvcs/free_particle.hpp"
#include "fvcs/rotator.hpp"
#include "fvcs/table.hpp"
#include "fvcs/wigner.hpp"
#include "fvcs_tools/app.hpp"

namespace fvcs::app {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v = linspace(std::log10(a), std::log10(b), n);
  for (double& x : v) x = std::pow(10.0, x);
  return v;
}

void emit_table(const Table& t, const std::string& name, const RunContext& ctx, CommandResult& r) {
  write_csv(ctx.out_dir / name, t);
  r.files.push_back(name);
  r.failed_rows += t.failed_rows();
  r.checks.push_back({name + ": rows", t.failed_rows() == 0, static_cast<double>(t.failed_rows()),
                      0.0, std::to_string(t.rows.size()) + " rows"});
}

void fig1(const RunContext& ctx, CommandResult& r) {
  const std::vector<double> lambdas{0.1, 0.5, 1.0, 2.0};
  emit_table(fig1_data(lambdas, linspace(0.0, 10.0, 201), ctx.params.tol_quad, ctx.threads),
             "fig1.csv", ctx, r);
}

void fig2(const RunContext& ctx, CommandResult& r) {
  const std::vector<double> means{0.0, 1.0, 2.0, 5.0};
  const Table t = fig2_data(means, linspace(0.05, 5.0, 100), ctx.params.tol_quad, ctx.threads);
  emit_table(t, "fig2.csv", ctx, r);
  double worst = -1e300;
  for (const auto& row : t.rows) {
    // columns 4.. are dq2 in lambda_c^2; compare in sigma^2 units
    for (std::size_t c = 4; c < row.size(); ++c) worst = std::max(worst, row[c] * row[1] * row[1]);
  }
  r.checks.push_back({"fig2: dq2 <= 1/2 sigma^2", worst <= 0.5, worst, 0.5, ""});
}

int rotator_n_max(std::complex<double> alpha, const SpectrumKind& kind, int n_max) {
  try {
    build_state({alpha}, kind, n_max);
    return n_max;
  } catch (const TruncationError& e) {
    return e.suggested_n_max();
  }
}

void fig3(const RunContext& ctx, CommandResult& r, const std::string& only) {
  const auto t = linspace(0.0, 1300.0, 1301);
  for (const auto& p : kFig3Presets) {
    if (!only.empty() && only != p.name) continue;
    const std::complex<double> alpha(p.q / std::numbers::sqrt2, p.p / std::numbers::sqrt2);
    const int n_max = rotator_n_max(alpha, SpectrumKind::rotator(p.lambda), ctx.params.n_max);
    const Table tab = fig3_data(p.lambda, alpha, t, n_max, ctx.threads);
    emit_table(tab, std::string(p.name) + ".csv", ctx, r);
    double diff = 0.0;
    for (const auto& row : tab.rows) diff = std::max(diff, std::abs(row[3] - row[2]));
    // only the large-lambda, small-radius case separates the two theories visibly
    const bool must_differ = std::string_view(p.name) == "fig3b";
    r.checks.push_back({std::string(p.name) + ": max |standard - nonlocal|",
                        !must_differ || diff > 1e-3, diff, must_differ ? 1e-3 : 0.0,
                        must_differ ? "must exceed tolerance" : "reported"});
  }
}

void fig4(const RunContext& ctx, CommandResult& r) {
  const std::vector<double> radii{0.0, 0.5, 1.0, 2.0};
  const Table t = fig4_data(logspace(1e-2, 10.0, 61), radii, ctx.threads);
  emit_table(t, "fig4.csv", ctx, r);
  double worst = 0.0;
  for (const auto& row : t.rows) worst = std::max(worst, std::abs(row[2] - row[3]));
  r.checks.push_back({"fig4: R=0 matches nonlocal", worst <= 1e-12, worst, 1e-12, ""});
}

void emit_grid(const PhaseSpaceGrid& g, const std::string& stem, const RunContext& ctx,
               CommandResult& r) {
  write_grid_csv(ctx.out_dir / (stem + ".csv"), g);
  write_grid_meta(ctx.out_dir / (stem + ".meta.json"), g);
  r.files.push_back(stem + ".csv");
  r.files.push_back(stem + ".meta.json");
  const auto n = negativity(g);
  r.checks.push_back({stem + ": negative region contains origin", n.box_contains(0.0, 0.0),
                      n.min_value, 0.0,
                      "negative fraction " + format_double(n.negative_fraction)});
  r.checks.push_back({stem + ": flagged points", g.flagged.empty(),
                      static_cast<double>(g.flagged.size()), 0.0,
                      "max error estimate " + format_double(g.err_estimate)});
}

// lambda = 8, mean momentum 8 mc: sqrt2 alpha'' = p/lambda = 1, q = 0.
void fig5(const RunContext& ctx, CommandResult& r) {
  const auto s = make_free_state({{0.0, 1.0 / std::numbers::sqrt2}}, 8.0);
  emit_grid(wigner_free(s, grid_around(0.0, 1.0, 5.0, 5.0, 0.05), ctx.threads), "fig5", ctx, r);
}

// lambda = 8, mean momentum 16 mc, coordinate lambda_c/4: alpha = sqrt2 (1 + i).
void fig6(const RunContext& ctx, CommandResult& r) {
  const std::complex<double> alpha(std::numbers::sqrt2, std::numbers::sqrt2);
  const auto kind = SpectrumKind::rotator(8.0);
  const auto s = build_state({alpha}, kind, rotator_n_max(alpha, kind, ctx.params.n_max));
  const auto g = wigner_rotator(s, grid_around(2.0, 2.0, 5.0, 5.0, 0.05), ctx.threads);
  emit_grid(g, "fig6", ctx, r);
  r.checks.push_back({"fig6: imaginary residue", g.max_imag < 1e-10, g.max_imag, 1e-10, ""});
}

}  // namespace

std::vector<std::string> figure_ids() {
  return {"fig1", "fig2", "fig3", "fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig5", "fig6"};
}

CommandResult run_figure(const std::string& id, const RunContext& ctx) {
  CommandResult r;
  std::filesystem::create_directories(ctx.out_dir);
  if (id == "fig1") {
    fig1(ctx, r);
  } else if (id == "fig2") {
    fig2(ctx, r);
  } else if (id == "fig3") {
    fig3(ctx, r, "");
  } else if (id.size() == 5 && id.starts_with("fig3") && id[4] >= 'a' && id[4] <= 'd') {
    fig3(ctx, r, id);
  } else if (id == "fig4") {
    fig4(ctx, r);
  } else if (id == "fig5") {
    fig5(ctx, r);
  } else if (id == "fig6") {
    fig6(ctx, r);
  } else {
    std::string known;
    for (const auto& f : figure_ids()) known += " " + f;
    throw UsageError("unknown figure '" + id + "'; known:" + known);
  }
  return r;
}

}  // namespace fvcs::app
