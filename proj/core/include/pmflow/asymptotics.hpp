#pragma once

// Decay-rate measurement: log-log power-law fits with validity preconditions,
// far-field L^q and PM-side rate experiments on Cauchy trajectories,
// stationary stability sweeps, two-solution convergence comparisons, and the
// discrete self-similarity check.

#include <optional>
#include <string>
#include <vector>

#include "pmflow/forces.hpp"
#include "pmflow/pm_norms.hpp"
#include "pmflow/solver.hpp"

namespace pmflow {

// Least-squares fit v ~ C t^e in log-log coordinates. Preconditions: at
// least 5 samples, strictly positive, spanning >= 1.5 decades in t.
struct PowerLawFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
};

PowerLawFit fit_powerlaw(const std::vector<double>& ts,
                         const std::vector<double>& vs);

// Annulus whose radii optionally ride the parabolic scaling r ~ sqrt(t).
// Centered at the box origin unless told otherwise: unmodulated point
// symbols place their singularity at x = 0.
struct RegionSpec {
  double r0 = 0.0;
  double r1 = 0.0;
  enum class Scale { fixed, sqrt_t };
  Scale scale = Scale::fixed;
  std::optional<std::array<double, 3>> center = std::array<double, 3>{0, 0, 0};
};

struct FitWindow {
  double t_lo = 0.0;
  double t_hi = 1e300;
};

struct RateSample {
  double t = 0.0;
  double value = 0.0;
};

struct RateReport {
  double exponent_fit = 0.0;     // d log v / d log t
  double exponent_theory = 0.0;
  double r_squared = 0.0;
  double tolerance = 0.0;
  enum class BoundType { equality, upper_bound };
  BoundType bound_type = BoundType::equality;
  bool pass = false;
  std::vector<RateSample> samples;  // the fitted window
};

// What run_farfield_rate measures per node: a physical-space L^q norm on the
// region, or a spectral PM^b norm on the default band.
struct RateQuantity {
  enum class Kind { lq, pm };
  Kind kind = Kind::lq;
  double order = 2.0;  // q for lq, b for pm

  static RateQuantity lq(double q) { return {Kind::lq, q}; }
  static RateQuantity pm(double b) { return {Kind::pm, b}; }
};

// Solve the Cauchy problem and fit the growth of the chosen quantity against
// the sharp theoretical envelope: (3-q)/(2q) for the far-field L^q norm on
// sqrt(t)-scaled regions (positive for q < 3), (2-b)/2 for the PM^b norm.
// Nodes whose scaled annulus leaves the resolved range [1.5 h, L/2] are
// skipped.
RateReport run_farfield_rate(const FourierVectorField& u0, const ForceSpec& f,
                             const RateQuantity& quantity, const GridSpec& grid,
                             const TimeGrid& times, const RegionSpec& region,
                             const FitWindow& window = {},
                             double tolerance = 0.05,
                             const SolveOptions& solve_opt = {});

// Stationary stability: solve with g1 and with g1 + s (g2 - g1) for
// s in {0.25, 0.5, 1}; the L^q gap on the region should scale linearly in
// the force gap (log-log slope ~ 1) with a stable constant.
struct StabilityReport {
  struct Sweep {
    double s = 0.0;
    double lhs = 0.0;  // ||w_1 - w_s||_q on the region
    double rhs = 0.0;  // force gap in PM^{b-2} over the band
    double c() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
  };
  std::vector<Sweep> sweeps;
  double slope = 0.0;  // log lhs vs log rhs
  double c_spread = 0.0;
  bool pass = false;
};

StabilityReport run_stationary_stability(const ForceSpec& g1,
                                         const ForceSpec& g2, double b,
                                         double q, const GridSpec& grid,
                                         const SolveOptions& solve_opt = {});

// Two-trajectory convergence in the style of the weighted-difference
// theorem: fit ||u1 - u2||_q (globally, or on a region when given), check it
// never beats the sharp envelope t^{3/(2q) - 1/2} by more than `slack`, and
// require the weighted quantity t^{1/2 - 3/(2q)} ||u1-u2||_q to decrease
// over the final decade of the grid.
struct ConvergenceReport {
  RateReport rate;
  std::vector<RateSample> weighted;
  bool weighted_decreasing = false;
  double force_gap_sup = 0.0;   // sup_t t^{delta/2} pm_delta(f1_hat - f2_hat)
  double datum_gap_final = 0.0; // pm_2(e^{t Delta}(u01 - u02)) at the last node
  bool pass = false;
};

ConvergenceReport run_convergence_rate(
    const FourierVectorField& u01, const FourierVectorField& u02,
    const ForceSpec& f1, const ForceSpec& f2, double delta, double q,
    const GridSpec& grid, const TimeGrid& times,
    const std::optional<RegionSpec>& region = std::nullopt,
    const FitWindow& window = {}, double slack = 0.1,
    const SolveOptions& solve_opt = {});

// Discrete parabolic self-similarity: for nodes with 4t also on the grid,
// compare u_hat(xi_k, 4t) against 4 u_hat(xi_{2k}, t) over integer radii
// k2_min <= |k|^2 <= k2_max (band-relative sup error per pair).
struct SelfSimilarityReport {
  struct Pair {
    double t = 0.0;
    double t4 = 0.0;
    double rel_error = 0.0;
  };
  std::vector<Pair> pairs;
  double worst = 0.0;
};

SelfSimilarityReport self_similarity_check(const SpaceTimeField& u, int k2_min,
                                           int k2_max);

// Datum with a degree -2 homogeneous symbol (the self-similar class):
// u0_hat = eps P_hat e_axis / |xi|^2, zero mode removed.
FourierVectorField make_selfsimilar_datum(const GridSpec& grid, double eps,
                                          int axis);

}  // namespace pmflow
