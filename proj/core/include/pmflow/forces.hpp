#pragma once

// Catalog of external forces with explicit Fourier symbols: point masses
// (fixed, moving, heat-mollified), a vertical line singularity with
// logarithmic strength, band-limited symbol tables, and integrable Gaussian
// mixtures with finite weighted moments. Also the moment-majorant and
// principal-value pairing checks that justify the singular symbols.

#include <memory>
#include <variant>
#include <vector>

#include "pmflow/detail/quadrature.hpp"
#include "pmflow/pm_norms.hpp"
#include "pmflow/spectral_grid.hpp"

namespace pmflow {

// ---------------------------------------------------------------------------
// Trajectories for moving point forces.

struct TrajectorySpec {
  enum class Kind { fixed, sqrt_drift, linear_drift };
  Kind kind = Kind::fixed;
  std::array<double, 3> velocity{0.0, 0.0, 0.0};

  std::array<double, 3> eval(double t) const;

  // Declared Holder regularity |gamma(s)-gamma(t)| <= H |s-t|^alpha on [0,T]:
  // alpha = 1/2 for sqrt drift, 1 otherwise.
  double holder_exponent() const;
  double holder_constant() const;
};

// Largest sampled ratio |gamma(s)-gamma(t)| / |s-t|^alpha over a pair grid in
// [t0, t1]; should not exceed holder_constant() materially.
double trajectory_holder_ratio(const TrajectorySpec& traj, double t0, double t1,
                               int samples = 64);

// ---------------------------------------------------------------------------
// Force kinds. Symbols follow the (2pi)^{-3/2} transform convention, so a
// point mass beta delta_0 has the flat symbol beta (2pi)^{-3/2}.

struct DiracForce {
  std::array<double, 3> amplitude{0.0, 0.0, 0.0};  // beta
};

struct MovingDiracForce {
  std::array<double, 3> amplitude{0.0, 0.0, 0.0};
  TrajectorySpec trajectory;  // symbol gains the phase e^{-i xi.gamma(t)}
};

// f = (b delta_line + c d/dx3 [log-strength line]) e_3, realized in Fourier
// space as (4 pi c 2^{-3/2} pi^{-1/2} i sgn(xi_3) - b (2pi)^{-3/2}) e_3.
struct LogLineForce {
  double b = 0.0;
  double c = 0.0;
};

// Explicit symbol samples on a grid, optionally modulated in time.
struct BandLimitedForce {
  enum class Modulation { constant, heat, power };
  std::shared_ptr<const FourierVectorField> symbol;
  Modulation modulation = Modulation::constant;
  double power_exponent = 0.0;  // for Modulation::power: symbol * t^p
};

// Gaussian mixture sum_j a_j (2 pi sigma_j^2)^{-3/2} exp(-|x-c_j|^2/2sigma_j^2)
// times a fixed direction; integrable with finite |x|^{2-b} moments.
struct MomentTerm {
  double a = 0.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double sigma = 1.0;
};

struct IntegrableMomentForce {
  std::vector<MomentTerm> terms;
  std::array<double, 3> direction{1.0, 0.0, 0.0};
};

struct ForceSpec;

// Linear combination sum coeff_i * f_i.
struct CompositeForce {
  std::vector<std::pair<double, ForceSpec>> terms;
};

struct ForceSpec {
  std::variant<DiracForce, MovingDiracForce, LogLineForce, BandLimitedForce,
               IntegrableMomentForce, CompositeForce>
      kind = DiracForce{};

  bool time_dependent() const;

  // Small-time power p in |f_hat(xi, t)| ~ t^p as t -> 0+ (0 for all bounded
  // symbols; power-modulated band-limited forces declare their exponent).
  double leading_power() const;
};

// Raw (unprojected) symbol f_hat(xi, t) sampled on the grid lattice,
// including the zero mode. Throws if a band-limited symbol lives on a
// different grid.
FourierVectorField force_symbol(const ForceSpec& f, const GridSpec& g,
                                double t);

// Total mass int g dx of a Gaussian mixture (= sum of weights).
double mixture_mass(const IntegrableMomentForce& g);

// ---------------------------------------------------------------------------
// Moment majorant: for b in (1,2) the mean-zero-corrected symbol obeys
//   sup |xi|^{b-2} |g_hat(xi) - beta (2pi)^{-3/2}| * (2pi)^{3/2}
//     <= C_ft(b) K(b) int |x|^{2-b} |g(x)| dx.

struct MomentReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double fourier_constant = 0.0;   // C_ft(b)
  double geometry_constant = 0.0;  // K(b), by quadrature
  double moment = 0.0;             // weighted moment of |g|
  double margin() const { return lhs > 0.0 ? rhs / lhs : 0.0; }
};

// C_ft(b) = Gamma((1+b)/2) / (pi^{3/2} 2^{2-b} Gamma((2-b)/2)).
double moment_fourier_constant(double b);

// K(b) = sup over unit directions of int |y|^{b-2} ... reduced to a 1D
// integral and evaluated adaptively; b in (1,2).
double moment_geometry_constant(double b,
                                const QuadratureControls& ctl = {});

// Weighted moment int |x|^{2-b} |g| dx of a Gaussian mixture (triangle
// inequality over terms; each term reduced to a radial integral).
double mixture_weighted_moment(const IntegrableMomentForce& g, double b,
                               const QuadratureControls& ctl = {});

// lhs evaluated as a sup over a dense deterministic sampling of the annulus
// band (not just lattice points); rhs from the constants above.
MomentReport moment_majorant(const IntegrableMomentForce& g, double b,
                             const NormBand& band);

// ---------------------------------------------------------------------------
// Principal-value pairing for the log-line symbol. Test functions are
// separable polynomial-Gaussians phi(x) = Q(x3) exp(-alpha |x|^2).

struct TestFunction {
  std::vector<double> q_coeffs;  // Q(z) = sum q_m z^m
  double alpha = 0.5;
};

struct PvPairingReport {
  double direct = 0.0;        // int log|x3| d/dx3 phi(0,0,x3) dx3
  double fourier_side = 0.0;  // pairing via the sgn(xi_3) symbol
  bool consistent = false;    // |direct - fourier| <= 1e-6 (1 + |direct|)
};

PvPairingReport pv_log_pairing(const TestFunction& phi,
                               const QuadratureControls& ctl = {});

// sup_{z>0} z^{d/2} e^{-z} = (d/2)^{d/2} e^{-d/2}: the sharp constant in the
// heat-kernel pseudomeasure decay estimate.
double heat_decay_constant(double delta);

}  // namespace pmflow
