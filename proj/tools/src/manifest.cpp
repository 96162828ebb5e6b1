#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "fvcs/errors.hpp"
#include "fvcs/table.hpp"
#include "fvcs_tools/app.hpp"

namespace fvcs::app {

bool CommandResult::ok() const {
  if (failed_rows != 0) return false;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

unsigned worker_threads(const char* env_value) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (env_value == nullptr || *env_value == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env_value, &end, 10);
  if (*end != '\0' || v < 1) {
    throw UsageError(std::string("FVCS_THREADS must be a positive integer, got '") + env_value + "'");
  }
  return std::min<unsigned long>(hw, static_cast<unsigned long>(v));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// json cannot carry nan/inf; store them as strings.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

nlohmann::json make_manifest(const ManifestInfo& info, const RunContext& ctx,
                             const CommandResult& result) {
  const nlohmann::json params = params_to_json(ctx.params);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : result.files) {
    const auto path = ctx.out_dir / f;
    nlohmann::json entry{{"name", f.generic_string()}};
    if (std::filesystem::exists(path)) {
      const std::string bytes = read_file(path);
      entry["bytes"] = bytes.size();
      entry["fnv1a"] = hex(fnv1a(bytes));
    } else {
      entry["missing"] = true;
    }
    files.push_back(entry);
  }
  // Anything else already in the directory (earlier runs) is listed too.
  std::vector<std::string> others;
  if (std::filesystem::is_directory(ctx.out_dir)) {
    for (const auto& e : std::filesystem::recursive_directory_iterator(ctx.out_dir)) {
      if (!e.is_regular_file()) continue;
      const auto rel = std::filesystem::relative(e.path(), ctx.out_dir);
      if (rel == "manifest.json") continue;
      if (std::find(result.files.begin(), result.files.end(), rel) != result.files.end()) continue;
      others.push_back(rel.generic_string());
    }
  }
  std::sort(others.begin(), others.end());
  for (const auto& o : others) files.push_back({{"name", o}, {"produced_by_this_run", false}});
  files.push_back({{"name", "manifest.json"}});

  nlohmann::json checks = nlohmann::json::array();
  std::size_t failed = 0;
  for (const auto& c : result.checks) {
    failed += c.passed ? 0 : 1;
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", number(c.measured)},
                      {"tolerance", number(c.tolerance)},
                      {"detail", c.detail}});
  }

  nlohmann::json m{
      {"tool", "fvcs"},
      {"version", FVCS_VERSION},
      {"command", info.command},
      {"target", info.target},
      {"params", params},
      {"params_hash", hex(fnv1a(params.dump()))},
      {"threads", ctx.threads},
      {"started_at", info.started_at},
      {"finished_at", info.finished_at},
      {"files", files},
      {"checks", checks},
      {"failed_checks", failed},
      {"failed_rows", result.failed_rows},
      {"status", !info.error.empty() ? "error" : result.ok() ? "ok" : "failed"},
  };
  if (!info.error.empty()) m["error"] = info.error;
  return m;
}

void write_manifest(const ManifestInfo& info, const RunContext& ctx, const CommandResult& result) {
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream out(ctx.out_dir / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot write manifest in " + ctx.out_dir.string());
  out << make_manifest(info, ctx, result).dump(2) << '\n';
}

}  // namespace fvcs::app
