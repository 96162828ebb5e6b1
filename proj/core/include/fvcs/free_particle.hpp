#pragma once

// Free-particle coherent states. Internally the momentum variable is the
// dimensionless p*sigma (sigma = 1/lambda); mean momenta reported in mc are
// lambda * sqrt(2) * Im(alpha).

#include <span>

#include "fvcs/config.hpp"
#include "fvcs/numerics.hpp"
#include "fvcs/table.hpp"

namespace fvcs {

struct FreeState {
  CoherentLabel label;
  double lambda = 0.1;

  double momentum_center() const;  ///< sqrt(2) alpha'' (packet units)
  double mean_momentum_mc() const; ///< lambda sqrt(2) alpha''
};

FreeState make_free_state(const CoherentLabel& label, double lambda);
/// State with mean momentum p_mean (mc) and mean coordinate q_mean (lambda_c).
FreeState free_state_from_means(double q_mean, double p_mean, double lambda,
                                Charge charge = Charge::positive);

/// Norm of the two-component wavefunction (should be 1).
RealResult free_norm(const FreeState& state, double tol = 1e-12);

/// Mean velocity (units of c) by quadrature of the momentum-space integral.
RealResult mean_velocity_quad(const FreeState& state, double tol = 1e-12);

/// Series settings for the (asymptotic) free-particle power series in lambda:
/// short burn-in, Weniger acceleration, tolerance 1e-10.
SeriesSpec effective_mass_spec();

/// Mean velocity from the double power series in lambda; every nested sum is
/// Weniger-transformed once its terms start growing. Throws DivergenceError
/// when even the transformed sequence does not settle.
RealResult mean_velocity_series(const FreeState& state,
                                const SeriesSpec& spec = effective_mass_spec());

/// Only the leading (n = 0) part of the series: the linear law p/m*.
RealResult mean_velocity_leading(const FreeState& state,
                                 const SeriesSpec& spec = effective_mass_spec());

/// 1/m* from its power series (asymptotic; summed with the Weniger delta
/// transformation). lambda = 0 gives exactly 1.
RealResult inverse_effective_mass(double lambda, const SeriesSpec& spec = effective_mass_spec());
/// m*/m.
RealResult effective_mass(double lambda, const SeriesSpec& spec = effective_mass_spec());
/// 1/m* = (2/sqrt(pi)) int p^2 exp(-p^2) / sqrt(1 + lambda^2 p^2) dp, by quadrature.
RealResult inverse_effective_mass_quad(double lambda, double tol = 1e-12);

/// Squared coordinate dispersion in sigma^2 units; <= 1/2, may be negative.
RealResult coord_dispersion(const FreeState& state, double tol = 1e-12);

/// Mean velocity against mean momentum (mc) for several lambda, plus the
/// classical curve p/sqrt(1+p^2).
Table fig1_data(std::span<const double> lambdas, std::span<const double> p_grid,
                double tol = 1e-10, unsigned threads = 1);

/// Coordinate dispersion (lambda_c^2 units) against momentum dispersion
/// Delta p (mc) for several mean momenta (mc), plus the nonlocal reference
/// Delta q = 1/(2 Delta p). Delta p = lambda/sqrt(2).
Table fig2_data(std::span<const double> p_means, std::span<const double> dp_grid,
                double tol = 1e-10, unsigned threads = 1);

}  // namespace fvcs
