#pragma once

// Pseudomeasure norms ||u||_{PM^a} = sup_xi |xi|^a |u_hat(xi)| measured on a
// spectral band, physical L^q and weak-L^q norms on annular regions, the
// space-time sup norm, and the L^q-vs-interpolation-bound gap.

#include <optional>
#include <vector>

#include "pmflow/spectral_grid.hpp"
#include "pmflow/time_grid.hpp"

namespace pmflow {

// Euclidean annulus in frequency space. On a finite grid the sup defining a
// PM norm is only meaningful between the smallest resolved frequency and the
// dealias ceiling, so every norm takes an explicit band.
struct NormBand {
  double xi_min = 0.0;
  double xi_max = 0.0;

  // [dxi, 0.9 * dealias ceiling]: full resolved range with a safety margin
  // below the corner of the dealias cube.
  static NormBand default_for(const GridSpec& g) {
    return {g.dxi(), 0.9 * g.max_retained_xi()};
  }

  void validate(const GridSpec& g) const;
};

// Annular region |x - center| in [r0, r1] in the minimum-image metric;
// center defaults to the box center.
struct Annulus {
  double r0 = 0.0;
  double r1 = 0.0;
  std::optional<std::array<double, 3>> center;

  void validate(const GridSpec& g) const;
};

// Trajectory of spectral snapshots on a time grid. `leading_power` declares
// the small-time behaviour |u_hat(xi,t)| ~ t^p used by the first Duhamel
// segment; 0 means bounded at t -> 0+.
struct SpaceTimeField {
  TimeGrid times;
  std::vector<FourierVectorField> snaps;
  double leading_power = 0.0;

  void validate() const;
};

// sup over modes with |xi| in the band of |xi|^a |u_hat(xi)|. The zero mode
// never enters (band floors are positive). Throws if no mode falls in band.
double pm_norm(const FourierVectorField& u, double a, const NormBand& band);

// Lattice L^q norm (sum |u|^q h^3)^{1/q} over an annulus, or the full box
// when no region is given. q >= 1.
double lq_norm(const PhysicalVectorField& u, double q);
double lq_norm(const PhysicalVectorField& u, double q, const Annulus& region);

// Weak-L^q (Marcinkiewicz) norm sup_lambda lambda * |{|u|>lambda}|^{1/q}
// over the same regions.
double weak_lq_norm(const PhysicalVectorField& u, double q);
double weak_lq_norm(const PhysicalVectorField& u, double q,
                    const Annulus& region);

// sup over snapshots of pm_norm(u(t), a, band).
double xa_norm(const SpaceTimeField& u, double a, const NormBand& band);

// L^q norm of a spectral field against its PM-interpolation majorant
// ||w||_2^{1-theta} ||w||_b^{theta}, theta = (q-3)/(q(b-2)). Valid parameter
// ranges: b in [0,2) with q in (3/(3-b), 3), q >= 2; or b in (2,3) with
// q in (3, 3/(3-b)). theta always lands in (0,1).
struct InterpolationReport {
  double lq = 0.0;
  double pm2 = 0.0;
  double pmb = 0.0;
  double theta = 0.0;
  double ratio = 0.0;  // lq / (pm2^{1-theta} pmb^{theta})
};

InterpolationReport interpolation_gap(const FourierVectorField& w, double b,
                                      double q, const NormBand& band);

}  // namespace pmflow
