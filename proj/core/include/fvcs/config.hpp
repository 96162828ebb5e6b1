#pragma once

// Unit conventions, physical parameters and shared result types.
//
// Internally hbar = c = m = 1. Lengths are measured in the Compton wavelength
// lambda_c = hbar/mc, momenta in mc, energies in mc^2. The localization ratio
// lambda = lambda_c / sigma fixes the packet (oscillator) length sigma = 1/lambda.
// Dimensionless phase-space coordinates used by the coherent-state formulas are
// q/sigma and p*sigma/hbar.

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace fvcs {

inline constexpr int kMinFockTruncation = 16;
inline constexpr double kMaxTolerance = 1e-3;

struct PhysicalParams {
  double lambda = 0.1;    ///< lambda_c / sigma, > 0
  double omega = 1.0;     ///< cyclotron frequency in mc^2/hbar, >= 0
  double lambda_r = 0.1;  ///< rotational localization ratio (magnetic states), >= 0
  double lambda_z = 0.1;  ///< longitudinal localization ratio (magnetic states), >= 0
  int n_max = 64;         ///< Fock truncation, >= 16
  double tol_quad = 1e-10;
  double tol_series = 1e-12;

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// Returns `params` unchanged if every invariant holds, otherwise throws
/// ConfigError naming the offending field.
PhysicalParams validate(const PhysicalParams& params);

/// Packet length sigma = 1/lambda in lambda_c units.
inline double sigma(const PhysicalParams& params) { return 1.0 / params.lambda; }

PhysicalParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const PhysicalParams& params);
/// Reads and validates a JSON config file.
PhysicalParams load_params(const std::filesystem::path& path);

enum class Charge : int { positive = +1, negative = -1 };

inline double sign_of(Charge c) { return c == Charge::positive ? 1.0 : -1.0; }

struct CoherentLabel {
  std::complex<double> alpha{0.0, 0.0};
  Charge charge = Charge::positive;
};

struct PhaseSpaceMeans {
  double q = 0.0;  ///< lambda_c units
  double p = 0.0;  ///< mc units
};

/// alpha = (q/sigma + i sigma p)/sqrt(2), with q in lambda_c and p in mc.
CoherentLabel label_from_means(double q_mean, double p_mean, const PhysicalParams& params,
                               Charge charge = Charge::positive);
PhaseSpaceMeans means_from_label(const CoherentLabel& label, const PhysicalParams& params);

/// alpha = (q + i p)/sqrt(2) for means already in dimensionless packet units.
CoherentLabel label_from_dimensionless(double q, double p, Charge charge = Charge::positive);

enum class Method { quadrature, series, matrix, closed_form };

std::string_view to_string(Method m);

template <class T>
struct EvalResult {
  T value{};
  double err_estimate = 0.0;  ///< absolute, >= 0
  Method method = Method::closed_form;
};

using RealResult = EvalResult<double>;
using ComplexResult = EvalResult<std::complex<double>>;

}  // namespace fvcs
