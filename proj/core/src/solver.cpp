#include "pmflow/solver.hpp"

#include <cmath>

#include "pmflow/detail/threading.hpp"

namespace pmflow {

namespace {

bool field_is_zero(const FourierVectorField& u) {
  for (const auto& comp : u.c)
    for (const cplx& v : comp)
      if (v != cplx{0.0, 0.0}) return false;
  return true;
}

// PM^2 norm of a - b over the band, without materializing the difference.
double pm2_distance(const FourierVectorField& a, const FourierVectorField& b,
                    const NormBand& band) {
  const GridSpec& g = a.grid;
  const double lo2 = band.xi_min * band.xi_min * (1.0 - 1e-12);
  const double hi2 = band.xi_max * band.xi_max * (1.0 + 1e-12);
  double best = 0.0;
  const std::size_t total = g.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double s = g.xi_norm_sq(idx);
    if (s < lo2 || s > hi2) continue;
    double mag2 = 0.0;
    for (int comp = 0; comp < 3; ++comp) {
      const cplx d = a.c[comp][idx] - b.c[comp][idx];
      mag2 += std::norm(d);
    }
    const double val = s * std::sqrt(mag2);  // |xi|^2 |diff|
    if (val > best) best = val;
  }
  return best;
}

double history_distance(const SpaceTimeField& a, const SpaceTimeField& b,
                        const NormBand& band) {
  double best = 0.0;
  for (std::size_t m = 0; m < a.snaps.size(); ++m)
    best = std::max(best, pm2_distance(a.snaps[m], b.snaps[m], band));
  return best;
}

}  // namespace

CauchySolution solve_cauchy(const FourierVectorField& u0, const ForceSpec& f,
                            const GridSpec& grid, const TimeGrid& times,
                            const SolveOptions& opt) {
  grid.validate();
  times.validate();
  if (!(u0.grid == grid))
    throw std::invalid_argument("solve_cauchy: datum grid mismatch");
  const NormBand band = opt.band.xi_max > 0.0 ? opt.band
                                              : NormBand::default_for(grid);
  band.validate(grid);

  FourierVectorField datum = u0;
  dealias(datum);
  datum = leray_project(std::move(datum));
  const bool zero_datum = field_is_zero(datum);

  // Stokes history y_m = e^{t_m Delta} datum + F(t_m).
  SpaceTimeField y = duhamel_force_history(f, grid, times, opt.force_path);
  if (!zero_datum) {
    for (std::size_t m = 0; m < times.nodes.size(); ++m) {
      FourierVectorField heated = heat_propagate(datum, times.nodes[m]);
      for (int comp = 0; comp < 3; ++comp)
        for (std::size_t i = 0; i < grid.size(); ++i)
          y.snaps[m].c[comp][i] += heated.c[comp][i];
    }
    y.leading_power = 0.0;  // bounded datum part dominates at t -> 0+
  }

  PicardProblem<SpaceTimeField> prob;
  prob.y = std::move(y);
  const SpaceTimeField* stokes = &prob.y;
  prob.norm = [&](const SpaceTimeField& x) { return xa_norm(x, 2.0, band); };
  prob.distance = [&](const SpaceTimeField& a, const SpaceTimeField& b) {
    return history_distance(a, b, band);
  };
  prob.step = [&grid, stokes, &band](const SpaceTimeField& x) {
    PicardStep<SpaceTimeField> s;
    SpaceTimeField b = duhamel_nonlinear_history(x, x);
    s.bilinear_norm = xa_norm(b, 2.0, band);
    for (std::size_t m = 0; m < b.snaps.size(); ++m)
      for (int comp = 0; comp < 3; ++comp)
        for (std::size_t i = 0; i < grid.size(); ++i)
          b.snaps[m].c[comp][i] += stokes->snaps[m].c[comp][i];
    b.leading_power = stokes->leading_power;
    s.next = std::move(b);
    return s;
  };

  PicardOptions popt;
  popt.tol = opt.tol;
  popt.max_iterations = opt.max_iterations;
  PicardResult<SpaceTimeField> result = picard_fixed_point(prob, popt);

  CauchySolution sol;
  sol.u = std::move(result.solution);
  sol.certificate = std::move(result.certificate);
  sol.band = band;
  sol.xa2 = xa_norm(sol.u, 2.0, band);
  return sol;
}

StationarySolution solve_stationary(const ForceSpec& g, const GridSpec& grid,
                                    const SolveOptions& opt) {
  grid.validate();
  const NormBand band = opt.band.xi_max > 0.0 ? opt.band
                                              : NormBand::default_for(grid);
  band.validate(grid);

  PicardProblem<FourierVectorField> prob;
  prob.y = stationary_lift(g, grid);
  dealias(prob.y);
  prob.norm = [&](const FourierVectorField& x) {
    return pm_norm(x, 2.0, band);
  };
  prob.distance = [&](const FourierVectorField& a,
                      const FourierVectorField& b) {
    return pm2_distance(a, b, band);
  };
  const FourierVectorField* lift = &prob.y;
  prob.step = [&grid, lift, &band](const FourierVectorField& x) {
    PicardStep<FourierVectorField> s;
    FourierVectorField b = stationary_bilinear(x, x);
    s.bilinear_norm = pm_norm(b, 2.0, band);
    for (int comp = 0; comp < 3; ++comp)
      for (std::size_t i = 0; i < grid.size(); ++i)
        b.c[comp][i] += lift->c[comp][i];
    s.next = std::move(b);
    return s;
  };

  PicardOptions popt;
  popt.tol = opt.tol;
  popt.max_iterations = opt.max_iterations;
  PicardResult<FourierVectorField> result = picard_fixed_point(prob, popt);

  StationarySolution sol;
  sol.w = std::move(result.solution);
  sol.certificate = std::move(result.certificate);
  sol.band = band;
  sol.pm2 = pm_norm(sol.w, 2.0, band);
  return sol;
}

}  // namespace pmflow
