#pragma once

// Charge-invariant Wigner functions on rectangular (q, p) grids. q and p are
// the dimensionless packet coordinates (q/sigma, p*sigma/hbar); the metadata
// carries the factors converting them to lambda_c and mc.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fvcs/free_particle.hpp"
#include "fvcs/rotator.hpp"

namespace fvcs {

struct GridSpec {
  double q_min = -6.0;
  double q_max = 6.0;
  int nq = 121;
  double p_min = -6.0;
  double p_max = 6.0;
  int np = 121;

  double dq() const { return (q_max - q_min) / (nq - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  double q(int i) const { return q_min + dq() * i; }
  double p(int j) const { return p_min + dp() * j; }
};

/// Packet standard deviation along q and p; grids must cover the centre
/// +- 6 of these.
inline constexpr double kPacketWidth = 0.70710678118654752440;
inline constexpr double kCoverageWidths = 6.0;

/// q half-width (around the packet centre) beyond which the free-kernel
/// values have fallen below ~tol. The ratio factor has branch points a
/// distance 1/lambda off the real x axis, so W decays like exp(-2|q|/lambda)
/// rather than as a Gaussian; marginals over q need this range.
double free_q_tail_halfwidth(double lambda, double tol = 1e-8);

/// Grid centred on (q0, p0) with the given half-widths and step.
GridSpec grid_around(double q0, double p0, double half_q, double half_p, double step);

struct PhaseSpaceGrid {
  GridSpec spec;
  Eigen::MatrixXd values;      ///< values(j, i) at (q(i), p(j))
  double err_estimate = 0.0;   ///< max pointwise numerical error estimate
  double max_imag = 0.0;       ///< largest discarded imaginary part
  std::vector<std::pair<int, int>> flagged;  ///< (i, j) points above tolerance
  nlohmann::json meta;
};

/// Free-particle kernel: cosine transform of the charge-structure ratio
/// factor, Filon-Simpson on [0, 6.5] with 1024 panels (Richardson error
/// estimate from halving the panel count).
PhaseSpaceGrid wigner_free(const FreeState& state, const GridSpec& spec, unsigned threads = 1,
                           double tol = 1e-8);

/// Rotator kernel: double sum over levels with the inner k-sum folded into a
/// two-term recurrence (no singularity at the origin).
PhaseSpaceGrid wigner_rotator(const RotatorState& state, const GridSpec& spec,
                              unsigned threads = 1);

struct Marginals {
  std::vector<double> q_marginal;  ///< step-weighted sum over p, per q
  std::vector<double> p_marginal;  ///< step-weighted sum over q, per p
  double total_mass = 0.0;
};

Marginals marginals(const PhaseSpaceGrid& grid);

struct Negativity {
  double min_value = 0.0;
  double negative_fraction = 0.0;  ///< fraction of grid points below -threshold
  bool any = false;
  double q_lo = 0.0, q_hi = 0.0, p_lo = 0.0, p_hi = 0.0;  ///< bounding box

  bool box_contains(double q, double p) const {
    return any && q_lo <= q && q <= q_hi && p_lo <= p && p <= p_hi;
  }
};

Negativity negativity(const PhaseSpaceGrid& grid, double threshold = 0.0);

/// Header "q,p,value"; p-major row order (q varies fastest); shortest
/// round-trip floats.
void write_grid_csv(const std::filesystem::path& path, const PhaseSpaceGrid& grid);
void write_grid_meta(const std::filesystem::path& path, const PhaseSpaceGrid& grid);

}  // namespace fvcs
