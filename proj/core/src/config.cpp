#include "fvcs/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fvcs/errors.hpp"

namespace fvcs {

namespace {

void require_tolerance(double tol, const char* field) {
  if (!(tol > 0.0 && tol <= kMaxTolerance)) {
    std::ostringstream os;
    os << field << " must be in (0, 1e-3], got " << tol;
    throw ConfigError(field, os.str());
  }
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ConfigError(field, std::string(field) + " must be finite");
}

}  // namespace

PhysicalParams validate(const PhysicalParams& params) {
  require_finite(params.lambda, "lambda");
  if (!(params.lambda > 0.0)) throw ConfigError("lambda", "lambda must be > 0");
  require_finite(params.omega, "omega");
  if (params.omega < 0.0) throw ConfigError("omega", "omega must be >= 0");
  require_finite(params.lambda_r, "lambda_r");
  if (params.lambda_r < 0.0) throw ConfigError("lambda_r", "lambda_r must be >= 0");
  require_finite(params.lambda_z, "lambda_z");
  if (params.lambda_z < 0.0) throw ConfigError("lambda_z", "lambda_z must be >= 0");
  if (params.n_max < kMinFockTruncation) {
    throw ConfigError("n_max", "n_max below minimum " + std::to_string(kMinFockTruncation));
  }
  require_tolerance(params.tol_quad, "tol_quad");
  require_tolerance(params.tol_series, "tol_series");
  return params;
}

PhysicalParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  static const std::set<std::string> known = {"lambda",   "omega", "lambda_r", "lambda_z",
                                              "n_max",    "tol_quad", "tol_series"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(key, "unknown config key '" + key + "'");
  }

  PhysicalParams p;
  auto read_number = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(key, std::string(key) + " must be a number");
    out = j[key].get<double>();
  };
  read_number("lambda", p.lambda);
  read_number("omega", p.omega);
  read_number("lambda_r", p.lambda_r);
  read_number("lambda_z", p.lambda_z);
  read_number("tol_quad", p.tol_quad);
  read_number("tol_series", p.tol_series);
  if (j.contains("n_max")) {
    if (!j["n_max"].is_number_integer()) throw ConfigError("n_max", "n_max must be an integer");
    p.n_max = j["n_max"].get<int>();
  }
  return validate(p);
}

nlohmann::json params_to_json(const PhysicalParams& params) {
  return nlohmann::json{{"lambda", params.lambda},     {"omega", params.omega},
                        {"lambda_r", params.lambda_r}, {"lambda_z", params.lambda_z},
                        {"n_max", params.n_max},       {"tol_quad", params.tol_quad},
                        {"tol_series", params.tol_series}};
}

PhysicalParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed config: ") + e.what());
  }
  return params_from_json(j);
}

CoherentLabel label_from_means(double q_mean, double p_mean, const PhysicalParams& params,
                               Charge charge) {
  const double s = sigma(params);
  return {{q_mean / (std::numbers::sqrt2 * s), s * p_mean / std::numbers::sqrt2}, charge};
}

PhaseSpaceMeans means_from_label(const CoherentLabel& label, const PhysicalParams& params) {
  const double s = sigma(params);
  return {std::numbers::sqrt2 * s * label.alpha.real(),
          std::numbers::sqrt2 * label.alpha.imag() / s};
}

CoherentLabel label_from_dimensionless(double q, double p, Charge charge) {
  return {{q / std::numbers::sqrt2, p / std::numbers::sqrt2}, charge};
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::series: return "series";
    case Method::matrix: return "matrix";
    case Method::closed_form: return "closed-form";
  }
  return "unknown";
}

}  // namespace fvcs
