#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "fvcs/errors.hpp"
#include "fvcs_tools/app.hpp"

namespace fvcs::app {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App cli{"Relativistic spin-0 coherent states: figure data, verification, sweeps"};
  cli.require_subcommand(1);
  cli.footer(std::string("Exit codes: ") + std::string(kExitCodes) +
             ".\nFVCS_THREADS caps the number of worker threads.");

  std::string config_path;
  std::string out_dir = "out";
  std::string preset;
  std::string positional;
  std::string observable;
  std::vector<std::string> params;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON parameter file");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
  };
  auto* figure = cli.add_subcommand("figure", "write figure data (" + join(figure_ids()) + ")");
  common(figure);
  figure->add_option("--preset", preset, "figure id");
  figure->add_option("id", positional, "figure id (same as --preset)");

  auto* verify = cli.add_subcommand("verify", "run verification suites (" + join(verify_suites()) + ")");
  common(verify);
  verify->add_option("--preset", preset, "suite name");
  verify->add_option("suite", positional, "suite name (same as --preset)");

  auto* sweep = cli.add_subcommand("sweep", "sweep an observable (" + join(observable_names()) + ")");
  common(sweep);
  sweep->add_option("--preset,--observable", observable, "observable name");
  sweep->add_option("name", positional, "observable name (same as --observable)");
  sweep->add_option("--param", params, "name=start:stop:count or name=v1,v2,...");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunContext ctx;
  ctx.out_dir = out_dir;
  ManifestInfo info;
  info.started_at = utc_timestamp();
  CommandResult result;

  try {
    if (!config_path.empty()) ctx.params = load_params(config_path);
    ctx.threads = worker_threads(std::getenv("FVCS_THREADS"));
    std::string target = !preset.empty() ? preset : !observable.empty() ? observable : positional;
    if (!preset.empty() && !positional.empty() && preset != positional) {
      throw UsageError("conflicting names '" + preset + "' and '" + positional + "'");
    }
    if (target.empty()) throw UsageError("missing figure id, suite or observable name");
    info.target = target;
    if (figure->parsed()) {
      info.command = "figure";
      result = run_figure(target, ctx);
    } else if (verify->parsed()) {
      info.command = "verify";
      result = run_verify(target, ctx);
    } else {
      info.command = "sweep";
      std::vector<SweepAxis> axes;
      for (const auto& p : params) axes.push_back(parse_axis(p));
      result = run_sweep(target, axes, ctx);
    }
  } catch (const UsageError& e) {
    std::cerr << "fvcs: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "fvcs: config error in '" << e.field() << "': " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    // numeric failure: keep whatever was produced and still write the manifest
    info.error = e.what();
    std::cerr << "fvcs: " << e.what() << '\n';
  }

  info.finished_at = utc_timestamp();
  try {
    write_manifest(info, ctx, result);
  } catch (const std::exception& e) {
    std::cerr << "fvcs: " << e.what() << '\n';
    return 1;
  }
  for (const auto& c : result.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << c.measured
              << " tol=" << c.tolerance << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
  }
  return info.error.empty() && result.ok() ? 0 : 1;
}

}  // namespace fvcs::app
