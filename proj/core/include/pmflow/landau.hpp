#pragma once

// Closed-form axisymmetric self-similar solutions of the stationary system
// driven by a point force along e_1, parametrized by c with |c| > 1, together
// with the force amplitude beta_1(c), its inverse, the Stokeslet the far
// field relaxes to, and finite-difference residual verification.

#include <array>

#include "pmflow/spectral_grid.hpp"

namespace pmflow {

struct LandauParams {
  double c = 2.0;  // |c| > 1

  void validate() const;
};

struct LandauValue {
  std::array<double, 3> u{0.0, 0.0, 0.0};
  double p = 0.0;
};

// Velocity and pressure at x != 0 (homogeneous of degree -1 resp. -2).
LandauValue landau_eval(const LandauParams& params,
                        const std::array<double, 3>& x);

// Net force amplitude carried by the solution with parameter c (odd in c,
// strictly decreasing on (1, inf), -> infinity as c -> 1+, -> 0 at infinity).
double landau_beta1(double c);

// Inverse of landau_beta1 on (1, inf) for beta > 0 (odd continuation for
// beta < 0). Newton-bracketed; |landau_beta1(c_from(beta)) - beta| <~ 1e-12.
double landau_c_from_beta(double beta);

// Stokeslet (Oseen tensor applied to beta e_1):
// (beta/8pi) (e_1/|x| + x x_1/|x|^3).
std::array<double, 3> stokeslet_eval(double beta,
                                     const std::array<double, 3>& x);

// Max pointwise residual of -Lap U + (U.grad)U + grad P and max divergence
// over a deterministic annulus sampling, using Richardson-extrapolated
// central differences at step h (leading error O(h^4) in exact arithmetic).
struct LandauResidual {
  double max_residual = 0.0;
  double max_divergence = 0.0;
};

LandauResidual landau_residual(const LandauParams& params, double h,
                               double r_inner = 0.5, double r_outer = 2.0);

// Sample the solution on the collocation lattice (minimum-image displacement
// from the box center), zeroing a ball of radius core_radius around the
// singular point.
PhysicalVectorField landau_sample_grid(const LandauParams& params,
                                       const GridSpec& grid,
                                       double core_radius);

}  // namespace pmflow
