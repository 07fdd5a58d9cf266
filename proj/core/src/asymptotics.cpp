#include "pmflow/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmflow/operators.hpp"

namespace pmflow {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& xs,
                      const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw std::invalid_argument("degenerate abscissa in fit");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  const double ss_res = syy - out.slope * sxy;
  out.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  return out;
}

FourierVectorField field_difference(const FourierVectorField& a,
                                    const FourierVectorField& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("field difference requires matching grids");
  FourierVectorField d = a;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < d.c[c].size(); ++i) d.c[c][i] -= b.c[c][i];
  d.divergence_free = a.divergence_free && b.divergence_free;
  return d;
}

// Upper-bound pass: the fitted slope must not be slower than theory by more
// than tol, and the whole window must stay below the envelope anchored at
// the earliest sample.
bool upper_bound_pass(const RateReport& rep) {
  if (rep.samples.empty()) return false;
  if (rep.exponent_fit > rep.exponent_theory + rep.tolerance) return false;
  const double c0 =
      rep.samples.front().value /
      std::pow(rep.samples.front().t, rep.exponent_theory);
  for (const RateSample& s : rep.samples) {
    const double bound = c0 * std::pow(s.t, rep.exponent_theory);
    if (s.value > bound * (1.0 + rep.tolerance)) return false;
  }
  return true;
}

void finish_report(RateReport& rep) {
  std::vector<double> ts, vs;
  ts.reserve(rep.samples.size());
  vs.reserve(rep.samples.size());
  for (const RateSample& s : rep.samples) {
    ts.push_back(s.t);
    vs.push_back(s.value);
  }
  const PowerLawFit fit = fit_powerlaw(ts, vs);
  rep.exponent_fit = fit.exponent;
  rep.r_squared = fit.r_squared;
  rep.pass = rep.bound_type == RateReport::BoundType::equality
                 ? std::abs(rep.exponent_fit - rep.exponent_theory) <=
                       rep.tolerance
                 : upper_bound_pass(rep);
}

}  // namespace

PowerLawFit fit_powerlaw(const std::vector<double>& ts,
                         const std::vector<double>& vs) {
  if (ts.size() != vs.size())
    throw std::invalid_argument("fit_powerlaw: size mismatch");
  if (ts.size() < 5)
    throw std::invalid_argument("fit_powerlaw: need at least 5 samples");
  std::vector<double> lx, ly;
  lx.reserve(ts.size());
  ly.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0) || !(vs[i] > 0.0))
      throw std::invalid_argument("fit_powerlaw: samples must be positive");
    lx.push_back(std::log(ts[i]));
    ly.push_back(std::log(vs[i]));
  }
  const auto [tmin, tmax] = std::minmax_element(ts.begin(), ts.end());
  if (std::log10(*tmax / *tmin) < 1.5 - 1e-9)
    throw std::invalid_argument(
        "fit_powerlaw: samples must span at least 1.5 decades");
  const LineFit line = least_squares(lx, ly);
  return {line.slope, line.intercept, line.r_squared};
}

RateReport run_farfield_rate(const FourierVectorField& u0, const ForceSpec& f,
                             const RateQuantity& quantity, const GridSpec& grid,
                             const TimeGrid& times, const RegionSpec& region,
                             const FitWindow& window, double tolerance,
                             const SolveOptions& solve_opt) {
  if (quantity.kind == RateQuantity::Kind::lq) {
    if (quantity.order < 1.0)
      throw std::invalid_argument("run_farfield_rate: q >= 1 required");
    if (!(region.r0 > 0.0) || !(region.r1 > region.r0))
      throw std::invalid_argument("run_farfield_rate: bad region radii");
  }
  const CauchySolution sol = solve_cauchy(u0, f, grid, times, solve_opt);

  RateReport rep;
  rep.tolerance = tolerance;
  rep.bound_type = RateReport::BoundType::equality;
  rep.exponent_theory = quantity.kind == RateQuantity::Kind::lq
                            ? (3.0 - quantity.order) / (2.0 * quantity.order)
                            : (2.0 - quantity.order) / 2.0;

  const double h = grid.spacing();
  for (std::size_t m = 0; m < times.nodes.size(); ++m) {
    const double t = times.nodes[m];
    if (t <= 0.0 || t < window.t_lo || t > window.t_hi) continue;
    double v = 0.0;
    if (quantity.kind == RateQuantity::Kind::lq) {
      const double s =
          region.scale == RegionSpec::Scale::sqrt_t ? std::sqrt(t) : 1.0;
      Annulus ann{region.r0 * s, region.r1 * s, region.center};
      if (ann.r0 < 1.5 * h || ann.r1 > 0.5 * grid.box_length) continue;
      v = lq_norm(to_physical(sol.u.snaps[m]), quantity.order, ann);
    } else {
      v = pm_norm(sol.u.snaps[m], quantity.order, sol.band);
    }
    if (v > 0.0) rep.samples.push_back({t, v});
  }
  finish_report(rep);
  return rep;
}

StabilityReport run_stationary_stability(const ForceSpec& g1,
                                         const ForceSpec& g2, double b,
                                         double q, const GridSpec& grid,
                                         const SolveOptions& solve_opt) {
  if (!(b > 1.0) || !(b < 3.0) || std::abs(b - 2.0) < 1e-9)
    throw std::invalid_argument(
        "run_stationary_stability: b in (1,3) \\ {2} required");
  const double L = grid.box_length;
  const double h = grid.spacing();
  // Gap concentrates near the singularity for supercritical b, in the far
  // field for subcritical b.
  Annulus ann = b > 2.0 ? Annulus{3.0 * h, L / 32.0, {{0.0, 0.0, 0.0}}}
                        : Annulus{L / 32.0, L / 8.0, {{0.0, 0.0, 0.0}}};
  ann.validate(grid);

  const NormBand band = solve_opt.band.xi_max > 0.0
                            ? solve_opt.band
                            : NormBand::default_for(grid);
  const StationarySolution base = solve_stationary(g1, grid, solve_opt);
  const FourierVectorField sym1 = force_symbol(g1, grid, 1.0);

  StabilityReport rep;
  for (double s : {0.25, 0.5, 1.0}) {
    ForceSpec gs{CompositeForce{{{1.0 - s, g1}, {s, g2}}}};
    const StationarySolution ws = solve_stationary(gs, grid, solve_opt);
    StabilityReport::Sweep sw;
    sw.s = s;
    sw.lhs = lq_norm(to_physical(field_difference(base.w, ws.w)), q, ann);
    sw.rhs = pm_norm(field_difference(sym1, force_symbol(gs, grid, 1.0)),
                     b - 2.0, band);
    rep.sweeps.push_back(sw);
  }

  std::vector<double> lx, ly;
  double cmin = 1e300, cmax = 0.0;
  for (const auto& sw : rep.sweeps) {
    if (!(sw.lhs > 0.0) || !(sw.rhs > 0.0))
      throw std::runtime_error("run_stationary_stability: degenerate gap");
    lx.push_back(std::log(sw.rhs));
    ly.push_back(std::log(sw.lhs));
    cmin = std::min(cmin, sw.c());
    cmax = std::max(cmax, sw.c());
  }
  rep.slope = least_squares(lx, ly).slope;
  rep.c_spread = cmax / cmin;
  rep.pass = std::abs(rep.slope - 1.0) <= 0.2 && rep.c_spread <= 2.0;
  return rep;
}

ConvergenceReport run_convergence_rate(
    const FourierVectorField& u01, const FourierVectorField& u02,
    const ForceSpec& f1, const ForceSpec& f2, double delta, double q,
    const GridSpec& grid, const TimeGrid& times,
    const std::optional<RegionSpec>& region, const FitWindow& window,
    double slack, const SolveOptions& solve_opt) {
  if (!(q > 3.0))
    throw std::invalid_argument("run_convergence_rate: q > 3 required");
  if (!(delta >= 0.0) || !(delta < 1.0))
    throw std::invalid_argument("run_convergence_rate: delta in [0,1)");

  const NormBand band = solve_opt.band.xi_max > 0.0
                            ? solve_opt.band
                            : NormBand::default_for(grid);

  ConvergenceReport rep;

  // Hypothesis side: weighted sup of the force gap in PM^delta and the
  // heat-evolved datum gap in PM^2 at the final node.
  for (double t : times.nodes) {
    if (t <= 0.0) continue;
    const FourierVectorField gap = field_difference(
        force_symbol(f1, grid, t), force_symbol(f2, grid, t));
    rep.force_gap_sup = std::max(
        rep.force_gap_sup, std::pow(t, 0.5 * delta) * pm_norm(gap, delta, band));
  }
  {
    FourierVectorField dgap = field_difference(u01, u02);
    dealias(dgap);
    dgap = leray_project(std::move(dgap));
    rep.datum_gap_final =
        pm_norm(heat_propagate(dgap, times.nodes.back()), 2.0, band);
  }

  const CauchySolution s1 = solve_cauchy(u01, f1, grid, times, solve_opt);
  const CauchySolution s2 = solve_cauchy(u02, f2, grid, times, solve_opt);

  rep.rate.tolerance = slack;
  rep.rate.bound_type = RateReport::BoundType::upper_bound;
  rep.rate.exponent_theory = 3.0 / (2.0 * q) - 0.5;

  const double h = grid.spacing();
  std::vector<RateSample> all;
  for (std::size_t m = 0; m < times.nodes.size(); ++m) {
    const double t = times.nodes[m];
    if (t <= 0.0) continue;
    const FourierVectorField diff =
        field_difference(s1.u.snaps[m], s2.u.snaps[m]);
    double v;
    if (region) {
      const double s =
          region->scale == RegionSpec::Scale::sqrt_t ? std::sqrt(t) : 1.0;
      Annulus ann{region->r0 * s, region->r1 * s, region->center};
      if (ann.r0 < 1.5 * h || ann.r1 > 0.5 * grid.box_length) continue;
      v = lq_norm(to_physical(diff), q, ann);
    } else {
      v = lq_norm(to_physical(diff), q);
    }
    if (!(v > 0.0)) continue;
    all.push_back({t, v});
    if (t >= window.t_lo && t <= window.t_hi) rep.rate.samples.push_back({t, v});
  }
  finish_report(rep.rate);

  const double w_exp = 0.5 - 3.0 / (2.0 * q);
  for (const RateSample& s : all)
    rep.weighted.push_back({s.t, std::pow(s.t, w_exp) * s.value});

  // Strict decrease across the final decade of measured nodes.
  rep.weighted_decreasing = false;
  if (!rep.weighted.empty()) {
    const double t_end = rep.weighted.back().t;
    rep.weighted_decreasing = true;
    const RateSample* prev = nullptr;
    int counted = 0;
    for (const RateSample& s : rep.weighted) {
      if (s.t < 0.1 * t_end) continue;
      if (prev && !(s.value < prev->value * (1.0 + 1e-12)))
        rep.weighted_decreasing = false;
      prev = &s;
      ++counted;
    }
    if (counted < 2) rep.weighted_decreasing = false;
  }

  rep.pass = rep.rate.pass && rep.weighted_decreasing;
  return rep;
}

SelfSimilarityReport self_similarity_check(const SpaceTimeField& u, int k2_min,
                                           int k2_max) {
  u.validate();
  if (k2_min < 1 || k2_max < k2_min)
    throw std::invalid_argument("self_similarity_check: bad k^2 range");
  const GridSpec& g = u.snaps.front().grid;

  SelfSimilarityReport rep;
  for (std::size_t m = 0; m < u.times.nodes.size(); ++m) {
    const double t = u.times.nodes[m];
    if (t <= 0.0) continue;
    const int j = u.times.find(4.0 * t);
    if (j < 0) continue;

    const FourierVectorField& coarse = u.snaps[std::size_t(j)];  // at 4t
    const FourierVectorField& fine = u.snaps[m];                 // at t
    double num = 0.0, den = 0.0;
    const int half = g.n / 2;
    for (int k1 = -half; k1 < half; ++k1)
      for (int k2 = -half; k2 < half; ++k2)
        for (int k3 = -half; k3 < half; ++k3) {
          const int r2 = k1 * k1 + k2 * k2 + k3 * k3;
          if (r2 < k2_min || r2 > k2_max) continue;
          if (std::abs(2 * k1) > half - 1 || std::abs(2 * k2) > half - 1 ||
              std::abs(2 * k3) > half - 1)
            continue;
          if (!g.keep_mode({k1, k2, k3}) ||
              !g.keep_mode({2 * k1, 2 * k2, 2 * k3}))
            continue;
          const std::size_t idx =
              g.index(g.k_to_index(k1), g.k_to_index(k2), g.k_to_index(k3));
          const std::size_t idx2 = g.index(
              g.k_to_index(2 * k1), g.k_to_index(2 * k2), g.k_to_index(2 * k3));
          double d2 = 0.0, a2 = 0.0;
          for (int c = 0; c < 3; ++c) {
            const cplx dv = coarse.c[c][idx] - 4.0 * fine.c[c][idx2];
            d2 += std::norm(dv);
            a2 += std::norm(coarse.c[c][idx]);
          }
          num = std::max(num, std::sqrt(d2));
          den = std::max(den, std::sqrt(a2));
        }
    if (den <= 0.0) continue;
    rep.pairs.push_back({t, 4.0 * t, num / den});
    rep.worst = std::max(rep.worst, num / den);
  }
  if (rep.pairs.empty())
    throw std::invalid_argument(
        "self_similarity_check: no (t, 4t) node pairs on the grid");
  return rep;
}

FourierVectorField make_selfsimilar_datum(const GridSpec& grid, double eps,
                                          int axis) {
  if (axis < 0 || axis > 2)
    throw std::invalid_argument("make_selfsimilar_datum: axis in {0,1,2}");
  FourierVectorField u0 = FourierVectorField::zeros(grid);
  for (int i1 = 0; i1 < grid.n; ++i1)
    for (int i2 = 0; i2 < grid.n; ++i2)
      for (int i3 = 0; i3 < grid.n; ++i3) {
        const std::size_t idx = grid.index(i1, i2, i3);
        const double s2 = grid.xi_norm_sq(idx);
        if (s2 <= 0.0) continue;
        u0.c[axis][idx] = eps / s2;
      }
  dealias(u0);
  return leray_project(std::move(u0));
}

}  // namespace pmflow
