#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "fvcs/free_particle.hpp"
#include "fvcs/magnetic.hpp"
#include "fvcs/rotator.hpp"
#include "fvcs/table.hpp"
#include "fvcs/wigner.hpp"
#include "fvcs_tools/app.hpp"

namespace fvcs::app {

namespace {

using Point = std::map<std::string, double>;

struct Observable {
  std::string name;
  std::string description;
  std::vector<std::string> params;
  std::vector<std::string> outputs;
  std::function<std::vector<double>(const Point&, const RunContext&)> eval;
};

std::complex<double> alpha_of(const Point& p) { return {p.at("alpha_re"), p.at("alpha_im")}; }

// Wigner summary on the default grid around the packet centre.
std::vector<double> grid_summary(const PhaseSpaceGrid& g) {
  const auto n = negativity(g);
  return {n.min_value, n.negative_fraction, marginals(g).total_mass,
          n.box_contains(0.0, 0.0) ? 1.0 : 0.0, g.err_estimate};
}

GridSpec summary_grid(std::complex<double> alpha) {
  const double cq = std::numbers::sqrt2 * alpha.real(), cp = std::numbers::sqrt2 * alpha.imag();
  const double reach = kCoverageWidths * kPacketWidth + 0.5;
  return {std::min(cq - reach, -1.0), std::max(cq + reach, 1.0), 81,
          std::min(cp - reach, -1.0), std::max(cp + reach, 1.0), 81};
}

int fit_n_max(std::complex<double> alpha, const SpectrumKind& kind, int n_max) {
  try {
    build_state({alpha}, kind, n_max);
    return n_max;
  } catch (const TruncationError& e) {
    return e.suggested_n_max();
  }
}

const std::vector<Observable>& registry() {
  static const std::vector<Observable> obs = {
      {"vbar", "free-particle mean velocity (c)", {"lambda", "alpha_im"}, {"vbar"},
       [](const Point& p, const RunContext& c) {
         return std::vector<double>{
             mean_velocity_quad(make_free_state({{0.0, p.at("alpha_im")}}, p.at("lambda")),
                                c.params.tol_quad).value};
       }},
      {"dq2", "free-particle coordinate dispersion (sigma^2)", {"lambda", "alpha_im"}, {"dq2"},
       [](const Point& p, const RunContext& c) {
         return std::vector<double>{
             coord_dispersion(make_free_state({{0.0, p.at("alpha_im")}}, p.at("lambda")),
                              c.params.tol_quad).value};
       }},
      {"mstar", "effective mass m*/m (series) and 1/m* by quadrature", {"lambda"},
       {"m_star", "inverse_m_star_quad"},
       [](const Point& p, const RunContext& c) {
         const double l = p.at("lambda");
         return std::vector<double>{effective_mass(l).value,
                                    inverse_effective_mass_quad(l, c.params.tol_quad).value};
       }},
      {"dR2", "rotator gyration-radius dispersion, standard and nonlocal", {"lambda", "abs_alpha_sq"},
       {"dR2_standard", "dR2_nonlocal"},
       [](const Point& p, const RunContext&) {
         const auto k = SpectrumKind::rotator(p.at("lambda"));
         const double a2 = p.at("abs_alpha_sq");
         return std::vector<double>{radius_stats(k, a2).dispersion,
                                    radius_stats(k.undeformed(), a2).dispersion};
       }},
      {"abar", "rotator mean annihilator at time t (1/omega)", {"lambda", "alpha_re", "alpha_im", "t"},
       {"abar_re", "abar_im", "closed_re", "closed_im"},
       [](const Point& p, const RunContext& c) {
         const auto alpha = alpha_of(p);
         const auto kind = SpectrumKind::rotator(p.at("lambda"));
         const double t[] = {p.at("t")};
         const auto s = build_state({alpha}, kind, fit_n_max(alpha, kind, c.params.n_max));
         const auto a = evolve_mean_a(s, t)[0];
         const auto b = evolve_mean_a_closed({alpha}, p.at("lambda"), t)[0];
         return std::vector<double>{a.real(), a.imag(), b.real(), b.imag()};
       }},
      {"vz", "longitudinal velocity in a magnetic field (c)",
       {"p_z", "lambda_z", "omega", "abs_alpha_r_sq"}, {"vz"},
       [](const Point& p, const RunContext&) {
         return std::vector<double>{
             mean_vz(p.at("p_z"), p.at("lambda_z"), p.at("omega"), p.at("abs_alpha_r_sq")).value};
       }},
      {"wigner", "free-particle Wigner grid summary", {"lambda", "alpha_re", "alpha_im"},
       {"min", "negative_fraction", "grid_mass", "origin_in_negative_box", "err_estimate"},
       [](const Point& p, const RunContext&) {
         const auto alpha = alpha_of(p);
         return grid_summary(wigner_free(make_free_state({alpha}, p.at("lambda")), summary_grid(alpha)));
       }},
      {"wigner_rotator", "rotator Wigner grid summary", {"lambda", "alpha_re", "alpha_im"},
       {"min", "negative_fraction", "grid_mass", "origin_in_negative_box", "err_estimate"},
       [](const Point& p, const RunContext& c) {
         const auto alpha = alpha_of(p);
         const auto kind = SpectrumKind::rotator(p.at("lambda"));
         const auto s = build_state({alpha}, kind, fit_n_max(alpha, kind, c.params.n_max));
         return grid_summary(wigner_rotator(s, summary_grid(alpha)));
       }},
  };
  return obs;
}

std::string registry_listing() {
  std::ostringstream os;
  for (const auto& o : registry()) {
    os << "\n  " << o.name << " (";
    for (std::size_t i = 0; i < o.params.size(); ++i) os << (i ? ", " : "") << o.params[i];
    os << "): " << o.description;
  }
  return os.str();
}

Point defaults(const PhysicalParams& p) {
  return {{"lambda", p.lambda},   {"omega", p.omega},     {"lambda_r", p.lambda_r},
          {"lambda_z", p.lambda_z}, {"alpha_re", 0.0},    {"alpha_im", 0.0},
          {"abs_alpha_sq", 0.0},  {"abs_alpha_r_sq", 0.0}, {"t", 0.0},
          {"p_z", 0.0}};
}

double parse_number(const std::string& s, const std::string& spec) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw UsageError("bad number '" + s + "' in sweep spec '" + spec + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> observable_names() {
  std::vector<std::string> out;
  for (const auto& o : registry()) out.push_back(o.name);
  return out;
}

SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw UsageError("sweep spec must be name=start:stop:count or name=v1,v2,...; got '" + spec + "'");
  }
  SweepAxis axis{spec.substr(0, eq), {}};
  const std::string body = spec.substr(eq + 1);
  auto split = [&](char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = body.find(sep, start);
      parts.push_back(body.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return parts;
  };
  if (body.find(':') != std::string::npos) {
    const auto parts = split(':');
    if (parts.size() != 3) throw UsageError("range must be start:stop:count in '" + spec + "'");
    const double a = parse_number(parts[0], spec), b = parse_number(parts[1], spec);
    const double n = parse_number(parts[2], spec);
    if (n < 1 || n != std::floor(n)) throw UsageError("count must be a positive integer in '" + spec + "'");
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) axis.values.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  } else {
    for (const auto& v : split(',')) axis.values.push_back(parse_number(v, spec));
  }
  return axis;
}

CommandResult run_sweep(const std::string& observable, const std::vector<SweepAxis>& axes,
                        const RunContext& ctx) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& o) { return o.name == observable; });
  if (it == reg.end()) {
    throw UsageError("unknown observable '" + observable + "'; registry:" + registry_listing());
  }
  if (axes.empty()) throw UsageError("empty sweep: give at least one --param name=...");
  for (const auto& a : axes) {
    if (std::find(it->params.begin(), it->params.end(), a.name) == it->params.end()) {
      throw UsageError("observable '" + observable + "' has no parameter '" + a.name +
                       "'; registry:" + registry_listing());
    }
    if (a.values.empty()) throw UsageError("empty sweep axis '" + a.name + "'");
  }

  // Cartesian product, first axis slowest.
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  std::vector<Point> points(total, defaults(ctx.params));
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (std::size_t k = axes.size(); k-- > 0;) {
      points[i][axes[k].name] = axes[k].values[rest % axes[k].values.size()];
      rest /= axes[k].values.size();
    }
  }

  Table t;
  for (const auto& a : axes) t.columns.push_back(a.name);
  for (const auto& o : it->outputs) t.columns.push_back(o);
  std::vector<std::vector<double>> rows(total);
  std::vector<std::string> status(total, "ok");
  parallel_for(total, ctx.threads, [&](std::size_t i) {
    std::vector<double> row;
    for (const auto& a : axes) row.push_back(points[i].at(a.name));
    try {
      const auto v = it->eval(points[i], ctx);
      row.insert(row.end(), v.begin(), v.end());
    } catch (const Error& e) {
      row.resize(t.columns.size(), std::nan(""));
      status[i] = e.what();
    }
    rows[i] = std::move(row);
  });
  for (std::size_t i = 0; i < total; ++i) t.add_row(std::move(rows[i]), status[i]);

  CommandResult r;
  std::filesystem::create_directories(ctx.out_dir);
  const std::string name = "sweep_" + observable + ".csv";
  write_csv(ctx.out_dir / name, t);
  r.files.push_back(name);
  r.failed_rows = t.failed_rows();
  r.checks.push_back({"sweep: rows", r.failed_rows == 0, static_cast<double>(r.failed_rows), 0.0,
                      std::to_string(total) + " points"});
  return r;
}

}  // namespace fvcs::app
