#pragma once

// Command layer of the fvcs tool: figure data, verification suites and
// parameter sweeps. Every command writes into an output directory and returns
// the files it produced plus pass/fail checks for the manifest.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fvcs/config.hpp"

namespace fvcs::app {

/// Bad command line or unknown name; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct RunContext {
  PhysicalParams params;
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;
};

struct CommandResult {
  std::vector<std::filesystem::path> files;  ///< relative to out_dir
  std::vector<Check> checks;
  std::size_t failed_rows = 0;

  bool ok() const;
};

inline constexpr std::string_view kExitCodes = "0 ok, 1 numeric failure, 2 usage/config error";

/// Worker count: hardware concurrency capped by FVCS_THREADS when set.
/// Throws UsageError for a malformed value.
unsigned worker_threads(const char* env_value);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

std::vector<std::string> figure_ids();
std::vector<std::string> verify_suites();
std::vector<std::string> observable_names();

CommandResult run_figure(const std::string& id, const RunContext& ctx);
CommandResult run_verify(const std::string& suite, const RunContext& ctx);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// "name=start:stop:count" (inclusive, count >= 1) or "name=v1,v2,...".
SweepAxis parse_axis(const std::string& spec);

/// Cartesian sweep (first axis slowest) of a registry observable.
CommandResult run_sweep(const std::string& observable, const std::vector<SweepAxis>& axes,
                        const RunContext& ctx);

struct ManifestInfo {
  std::string command;
  std::string target;
  std::string started_at;
  std::string finished_at;
  std::string error;  ///< set when the command aborted
};

nlohmann::json make_manifest(const ManifestInfo& info, const RunContext& ctx,
                             const CommandResult& result);
/// Writes manifest.json into ctx.out_dir; the manifest lists itself.
void write_manifest(const ManifestInfo& info, const RunContext& ctx, const CommandResult& result);

std::string utc_timestamp();

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace fvcs::app
