// Acceptance harness: one PASS/FAIL line per criterion. Criteria listed in the
// expected-red file (number plus reason) may fail without failing the run; an
// expected-red criterion that passes is reported as XPASS and fails the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fvcs/fock.hpp"
#include "fvcs/free_particle.hpp"
#include "fvcs/magnetic.hpp"
#include "fvcs/rotator.hpp"
#include "fvcs/spectrum.hpp"
#include "fvcs/table.hpp"
#include "fvcs_tools/app.hpp"
#include "oracles/oracles.hpp"

namespace fs = std::filesystem;
using namespace fvcs;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what, double measured, double tol) {
    std::ostringstream os;
    os << (ok ? "ok   " : "FAIL ") << what << ": " << format_double(measured) << " (tol "
       << format_double(tol) << ")";
    notes.push_back(os.str());
    passed = passed && ok;
  }
  void max_below(const std::string& what, double measured, double tol) {
    require(measured <= tol, what, measured, tol);
  }
  void note(const std::string& s) { notes.push_back("     " + s); }
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fvcs_acceptance_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

app::RunContext context(const std::string& name) {
  app::RunContext ctx;
  ctx.out_dir = scratch(name);
  ctx.threads = app::worker_threads(std::getenv("FVCS_THREADS"));
  return ctx;
}

// Every check of a command suite, folded into the outcome.
void require_checks(Outcome& o, const app::CommandResult& r) {
  for (const auto& c : r.checks) o.require(c.passed, c.name, c.measured, c.tolerance);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// --- criteria -------------------------------------------------------------

Outcome nonrelativistic_recovery() {
  Outcome o;
  require_checks(o, app::run_verify("limits", context("limits")));
  return o;
}

Outcome series_vs_quadrature() {
  Outcome o;
  const auto ctx = context("series");
  const auto r = app::run_verify("series-vs-quad", ctx);
  require_checks(o, r);
  // every cell is either converged and within tolerance of the long-double
  // oracle, or carries a divergence flag
  const std::string csv = slurp(ctx.out_dir / "series_vs_quad.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  int cells = 0, flagged = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    ++cells;
    if (line.find("divergent") != std::string::npos) {
      ++flagged;
      continue;
    }
    const double l = std::stod(f[0]), a = std::stod(f[1]), series = std::stod(f[3]);
    worst = std::max(worst, std::abs(series - static_cast<double>(oracle::mean_velocity(l, a))));
  }
  o.require(cells == 16, "grid cells written", cells, 16);
  o.max_below("series vs trapezoid oracle, converged cells", worst, 1e-8);
  o.note(std::to_string(flagged) + " cells flagged divergent");
  return o;
}

Outcome effective_mass_slope() {
  Outcome o;
  for (double l : {0.1, 0.2, 0.3}) {
    // v against the mean momentum p = sqrt2 lambda alpha''
    auto v = [l](double a) {
      return mean_velocity_quad(make_free_state({{0.0, a}}, l), 1e-13).value;
    };
    const double slope = oracle::fd_slope(v, 0.0, 1e-2) / (std::numbers::sqrt2 * l);
    o.max_below("1/m* vs slope of quadrature velocity, lambda=" + format_double(l),
                std::abs(slope - inverse_effective_mass(l).value), 1e-6);
  }
  double prev = 0.0;
  bool increasing = true;
  for (double l : linspace(0.0, 0.3, 31)) {
    const double m = effective_mass(l).value;
    increasing = increasing && m > prev;
    prev = m;
  }
  o.require(increasing, "m* strictly increasing on lambda in [0, 0.3]", prev, 1.0);
  return o;
}

Outcome negative_dispersion() {
  Outcome o;
  const double dq2 = coord_dispersion(make_free_state({{0.0, 0.0}}, 8.0)).value;
  o.require(dq2 < 0.0, "dq2 < 0 at lambda=8, alpha''=0", dq2, 0.0);
  const auto r = app::run_figure("fig2", context("fig2"));
  for (const auto& c : r.checks) {
    if (c.name.find("dq2") != std::string::npos) o.require(c.passed, c.name, c.measured, c.tolerance);
  }
  return o;
}

Outcome operator_algebra() {
  Outcome o;
  const int n = 128;
  const std::vector<double> pz{0.0, 0.25, 1.0, 3.0};
  for (double l : {0.1, 1.0, 8.0}) {
    const auto kind = SpectrumKind::rotator(l);
    const std::string at = ", lambda=" + format_double(l);
    o.max_below("[[a],[a]^+] closed form" + at, commutator_check_32(kind, n).max_deviation, 1e-10);
    o.max_below("[[x],[y]] closed form" + at, commutator_check_32a(kind, n).max_deviation, 1e-10);
    const auto c = commutator_check_38(l, pz, n);
    o.max_below("[[z],[a]] vs finite differences" + at, c.max_deviation, 1e-6);
    o.require(c.zero_pz_max == 0.0, "[[z],[a]] exactly 0 at p_z=0" + at, c.zero_pz_max, 0.0);
  }
  return o;
}

Outcome hyperbolic_identity() {
  Outcome o;
  for (double l : {0.1, 1.0, 8.0}) {
    double worst = 0.0;
    for (const auto& k : {SpectrumKind::rotator(l), SpectrumKind::magnetic(l, 0.0),
                          SpectrumKind::magnetic(l, 0.5), SpectrumKind::magnetic(l, 5.0)}) {
      for (int m = 1; m <= 1000; ++m) {
        const auto ec = eps_chi(k, m);
        worst = std::max(worst, std::abs(ec.eps * ec.eps - ec.chi * ec.chi - 1.0));
      }
    }
    o.max_below("eps^2 - chi^2 - 1, rotator and magnetic, lambda=" + format_double(l), worst, 1e-12);
    const auto b = eps_factorial_bounds(SpectrumKind::rotator(l));
    o.require(b.bracketed, "[eps(n)]! limit bracketed by fitted a, b, lambda=" + format_double(l),
              b.log_limit, 0.0);
    o.note("a=" + format_double(b.a) + " b=" + format_double(b.b));
  }
  return o;
}

Outcome dynamics() {
  Outcome o;
  const CoherentLabel label{{1.0, 0.0}};
  auto gap = [&](double l, double window) {
    const auto t = linspace(0.0, window, 4001);
    const auto s = build_state(label, SpectrumKind::rotator(l), 48);
    const auto a = evolve_mean_a(s, t);
    const auto c = evolve_mean_a_closed(label, l, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(a[i] - c[i]));
    return worst;
  };
  const double period = [](double l) { return 2.0 * std::numbers::pi / (l * l); }(0.1);
  const double g1 = gap(0.1, period);
  const double g2 = gap(0.05, 4.0 * period);  // one low-frequency period at lambda = 0.05
  o.require(g1 / g2 >= 8.0, "gap shrink factor over one low-frequency period, lambda 0.1 -> 0.05",
            g1 / g2, 8.0);
  o.note("gaps " + format_double(g1) + ", " + format_double(g2) + "; fixed window [0, 2pi]: " +
         format_double(gap(0.1, 2 * std::numbers::pi) / gap(0.05, 2 * std::numbers::pi)));

  // |a(t)| over eight low-frequency periods; spectral peak at Omega = lambda^2
  const double l = 0.1;
  const int samples = 1024;
  const double span = 8.0 * period;
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = span * i / samples;
  const auto a = evolve_mean_a(build_state(label, SpectrumKind::rotator(l), 48), t);
  std::vector<double> mag(samples);
  for (int i = 0; i < samples; ++i) mag[i] = std::abs(a[i]);
  const auto spec = oracle::dft_magnitude(mag);
  const auto peak = std::max_element(spec.begin() + 1, spec.end()) - spec.begin();
  const double bin = 2.0 * std::numbers::pi / span;
  o.max_below("|Omega_peak - lambda^2| in frequency bins", std::abs(peak * bin - l * l) / bin, 1.0);
  return o;
}

Outcome rotator_statistics() {
  Outcome o;
  for (double l : {0.1, 1.0, 8.0}) {
    const auto kind = SpectrumKind::rotator(l);
    const auto r = radius_stats(kind, 0.0);
    o.require(r.dispersion == 1.0, "dR2(alpha=0) == 1, lambda=" + format_double(l), r.dispersion, 0.0);
    o.max_below("deformed vs nonlocal dR2 at alpha=0, lambda=" + format_double(l),
                std::abs(r.dispersion - radius_stats(kind.undeformed(), 0.0).dispersion), 1e-12);
  }
  const auto s = build_state({{1.0, 1.0}}, SpectrumKind::rotator(1.0), 64);
  const std::vector<double> t{0.0, 1.0, 10.0, 123.4, 1300.0};
  const auto r2 = evolve_mean_R2(s, t);
  double drift = 0.0;
  for (double v : r2) drift = std::max(drift, std::abs(v - r2[0]));
  o.max_below("<R^2> drift under evolution", drift, 1e-12);
  const auto ctx = context("fig4");
  const auto r = app::run_figure("fig4", ctx);
  require_checks(o, r);
  return o;
}

Outcome magnetic_reductions() {
  Outcome o;
  const auto t = linspace(0.0, 1000.0, 501);
  const std::complex<double> ar(0.8, -0.3);
  const auto m = evolve_mean_ar(ar, {0.3, 1.2}, 0.1, 0.0, t);
  const auto c = evolve_mean_a_closed({ar}, 0.1, t);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(m[i] - c[i]));
  o.max_below("magnetic envelope at lambda_z=0 vs rotator closed form", worst, 1e-14);

  double vz = 0.0;
  for (double pz : {0.3, 1.0, 2.5}) {
    for (double lz : {0.1, 0.2}) {
      const auto free = make_free_state({{0.0, pz / (std::numbers::sqrt2 * lz)}}, lz);
      vz = std::max(vz, std::abs(mean_vz(pz, lz, 0.0, 3.0).value - mean_velocity_leading(free).value));
    }
  }
  o.max_below("v_z at omega=0 vs free leading-order velocity", vz, 1e-12);

  std::vector<double> scaled;
  for (double lz : {0.05, 0.1, 0.2}) scaled.push_back(lz * crossover_time({1.0, 0.0}, {0.0, 1.0}, 0.1, lz));
  double spread = 0.0;
  for (double s : scaled) spread = std::max(spread, std::abs(s / scaled[1] - 1.0));
  o.max_below("lambda_z * crossover time, relative spread over lambda_z in {0.05, 0.1, 0.2}", spread, 0.15);
  return o;
}

Outcome wigner_properties() {
  Outcome o;
  require_checks(o, app::run_verify("wigner", context("wigner")));
  for (const char* f : {"fig5", "fig6"}) require_checks(o, app::run_figure(f, context(f)));
  return o;
}

Outcome moments() {
  Outcome o;
  require_checks(o, app::run_verify("moments", context("moments")));
  return o;
}

Outcome determinism() {
  Outcome o;
  const char* bin = FVCS_BINARY;
  const std::string threads = std::to_string(app::worker_threads(std::getenv("FVCS_THREADS")));
  for (const char* fig : {"fig1", "fig3", "fig5"}) {
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
      dirs.push_back(scratch(std::string("det_") + fig + "_" + std::to_string(run)));
      const std::string cmd = "FVCS_THREADS=" + threads + " \"" + bin + "\" figure " + fig +
                              " --out \"" + dirs.back().string() + "\" > /dev/null";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, std::string(fig) + " run " + std::to_string(run) + " exit status", rc, 0);
    }
    int compared = 0, differing = 0;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().filename() == "manifest.json") continue;  // carries timestamps
      ++compared;
      if (slurp(e.path()) != slurp(dirs[1] / e.path().filename())) ++differing;
    }
    o.require(compared > 0 && differing == 0,
              std::string(fig) + ": files differing between runs (" + std::to_string(compared) + " compared)",
              differing, 0);
  }
  return o;
}

std::map<int, std::string> read_expected_red(const fs::path& p) {
  std::map<int, std::string> out;
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read expected-red file " + p.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int id = 0;
    ls >> id;
    std::string reason;
    std::getline(ls, reason);
    out[id] = reason;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::map<int, std::string> expected_red;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expected-red" && i + 1 < argc) {
      expected_red = read_expected_red(argv[++i]);
    } else {
      std::cerr << "usage: fvcs_acceptance [--expected-red FILE]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"nonrelativistic recovery", nonrelativistic_recovery},
      {"series vs quadrature", series_vs_quadrature},
      {"effective mass", effective_mass_slope},
      {"negative dispersion", negative_dispersion},
      {"operator algebra", operator_algebra},
      {"hyperbolic identity and eps-factorial bounds", hyperbolic_identity},
      {"dynamics cross-check", dynamics},
      {"rotator statistics", rotator_statistics},
      {"magnetic reductions", magnetic_reductions},
      {"wigner properties", wigner_properties},
      {"moments", moments},
      {"determinism", determinism},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.notes.push_back(std::string("FAIL aborted: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool red = expected_red.contains(id);
    const char* tag = o.passed ? (red ? "XPASS" : "PASS") : (red ? "FAIL (expected red)" : "FAIL");
    if (o.passed == red) ++unexpected;
    std::printf("[%2d] %s %s (%.1fs)\n", id, tag, criteria[i].first.c_str(), secs);
    for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
    if (red && !o.passed) std::printf("       expected red:%s\n", expected_red[id].c_str());
  }
  fs::remove_all(fs::temp_directory_path() / ("fvcs_acceptance_" + std::to_string(::getpid())));
  std::printf("%d unexpected result(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
