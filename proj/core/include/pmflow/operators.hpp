#pragma once

// Mode-wise Stokes machinery: heat propagator, Leray projection, the Duhamel
// integrals for the bilinear term and for external forces (exact exponential
// recursion on the time grid), the stationary lift and bilinear map, and the
// Riesz-product constant behind the PM^a bilinear estimates.

#include "pmflow/detail/quadrature.hpp"
#include "pmflow/forces.hpp"
#include "pmflow/pm_norms.hpp"
#include "pmflow/spectral_grid.hpp"
#include "pmflow/time_grid.hpp"

namespace pmflow {

// e^{t Delta}: multiply every mode by exp(-t |xi|^2). t >= 0.
FourierVectorField heat_propagate(const FourierVectorField& u, double t);

// P_hat(xi) = I - xi xi^T/|xi|^2; the zero mode is annihilated.
FourierVectorField leray_project(FourierVectorField u);

// N(u,v) = -P_hat (i xi . conv(u,v)): the projected advection symbol feeding
// the Duhamel integral (sign chosen so that u = y + Duhamel(N) is the mild
// form). Output is dealiased, divergence-free, zero mode zero.
FourierVectorField nonlinear_term(const FourierVectorField& u,
                                  const FourierVectorField& v);

// B-histories: at each node t_m,
//   B(t_m) = int_0^{t_m} e^{-(t_m-tau)|xi|^2} N(u,v)(tau) dtau,
// advanced exactly per segment for piecewise-linear N, with the first
// segment integrated against the declared power profile (tau/t_1)^p,
// p = u.leading_power + v.leading_power.
SpaceTimeField duhamel_nonlinear_history(const SpaceTimeField& u,
                                         const SpaceTimeField& v);

// B(u,v)(t) for t equal to one of the nodes of u.times.
FourierVectorField duhamel_nonlinear(const SpaceTimeField& u,
                                     const SpaceTimeField& v, double t);

enum class DuhamelPath { automatic, closed_form, quadrature };

// F(t) = int_0^t e^{(t-tau) Delta} P f(tau) dtau. Time-independent forces and
// heat/power modulated symbols admit closed forms; the quadrature path runs
// the same segment recursion as the bilinear term (t must then be a node).
FourierVectorField duhamel_force(const ForceSpec& f, double t,
                                 const GridSpec& grid, const TimeGrid& times,
                                 DuhamelPath path = DuhamelPath::automatic);

// F(t_m) at every node in one pass (single recursion for quadrature forces).
SpaceTimeField duhamel_force_history(const ForceSpec& f, const GridSpec& grid,
                                     const TimeGrid& times,
                                     DuhamelPath path = DuhamelPath::automatic);

// G = |xi|^{-2} P g_hat: the stationary lift of a force.
FourierVectorField stationary_lift(const ForceSpec& g, const GridSpec& grid);

// B_E(w,z) = -|xi|^{-2} P_hat (i xi . conv(w,z)): stationary counterpart of
// the Duhamel bilinear term (w = G + B_E(w,w) is the fixed-point form).
FourierVectorField stationary_bilinear(const FourierVectorField& w,
                                       const FourierVectorField& z);

// int_{R^3} |eta|^{-2} |e - eta|^{-b} d eta for a unit vector e, b in (1,3).
// The polar direction integrates in closed form; the radial integral is
// evaluated adaptively in exponential variables near the singular sphere and
// at the tail. Diverges (grows beyond 1e3) within ~1e-3 of the endpoints.
double riesz_constant(double b);

// First-segment profile integral J_p(z) = int_0^1 e^{-z(1-s)} s^p ds, p > -1.
double duhamel_profile_integral(double p, double z);

}  // namespace pmflow
