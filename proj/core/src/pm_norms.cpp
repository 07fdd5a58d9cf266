#include "pmflow/pm_norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmflow {

void NormBand::validate(const GridSpec& g) const {
  if (!(xi_min > 0.0) || !(xi_max > xi_min))
    throw std::invalid_argument("NormBand: need 0 < xi_min < xi_max");
  if (xi_max > g.max_retained_xi() * (1.0 + 1e-12))
    throw std::invalid_argument(
        "NormBand: xi_max exceeds the dealias ceiling of the grid");
}

void Annulus::validate(const GridSpec& g) const {
  if (!(r0 >= 0.0) || !(r1 > r0))
    throw std::invalid_argument("Annulus: need 0 <= r0 < r1");
  if (r1 > 0.5 * g.box_length * (1.0 + 1e-12))
    throw std::invalid_argument(
        "Annulus: r1 exceeds L/2, the largest radius free of image overlap");
}

void SpaceTimeField::validate() const {
  times.validate();
  if (snaps.size() != times.nodes.size())
    throw std::invalid_argument("SpaceTimeField: node/snapshot count mismatch");
  for (const auto& s : snaps)
    if (!(s.grid == snaps.front().grid))
      throw std::invalid_argument("SpaceTimeField: snapshots on mixed grids");
}

double pm_norm(const FourierVectorField& u, double a, const NormBand& band) {
  band.validate(u.grid);
  const GridSpec& g = u.grid;
  const std::size_t total = g.size();
  const double lo2 = band.xi_min * band.xi_min * (1.0 - 1e-12);
  const double hi2 = band.xi_max * band.xi_max * (1.0 + 1e-12);
  double best = -1.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double s = g.xi_norm_sq(idx);
    if (s < lo2 || s > hi2) continue;
    const double m0 = std::abs(u.c[0][idx]);
    const double m1 = std::abs(u.c[1][idx]);
    const double m2 = std::abs(u.c[2][idx]);
    const double mag = std::sqrt(m0 * m0 + m1 * m1 + m2 * m2);
    const double val = std::pow(s, 0.5 * a) * mag;
    if (val > best) best = val;
  }
  if (best < 0.0)
    throw std::invalid_argument("pm_norm: no lattice mode falls in the band");
  return best;
}

namespace {

std::array<double, 3> region_center(const GridSpec& g, const Annulus& region) {
  if (region.center) return *region.center;
  const double c = 0.5 * g.box_length;
  return {c, c, c};
}

template <class Accept>
double lq_accumulate(const PhysicalVectorField& u, double q,
                     const Accept& accept) {
  const GridSpec& g = u.grid;
  const double h3 = std::pow(g.spacing(), 3);
  double sum = 0.0;
  const std::size_t total = g.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (!accept(idx)) continue;
    sum += std::pow(u.magnitude(idx), q) * h3;
  }
  return std::pow(sum, 1.0 / q);
}

template <class Accept>
double weak_accumulate(const PhysicalVectorField& u, double q,
                       const Accept& accept) {
  const GridSpec& g = u.grid;
  const double h3 = std::pow(g.spacing(), 3);
  std::vector<double> mags;
  mags.reserve(g.size());
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (accept(idx)) mags.push_back(u.magnitude(idx));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  // sup_lambda lambda |{|u|>lambda}|^{1/q} is attained just below a sample
  // value: with m_1 >= m_2 >= ... it equals max_i m_i (i h^3)^{1/q}.
  double best = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const double v =
        mags[i] * std::pow(static_cast<double>(i + 1) * h3, 1.0 / q);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

double lq_norm(const PhysicalVectorField& u, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  return lq_accumulate(u, q, [](std::size_t) { return true; });
}

double lq_norm(const PhysicalVectorField& u, double q, const Annulus& region) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  region.validate(u.grid);
  const auto center = region_center(u.grid, region);
  const double lo2 = region.r0 * region.r0;
  const double hi2 = region.r1 * region.r1;
  std::size_t hits = 0;
  const double r = lq_accumulate(u, q, [&](std::size_t idx) {
    const auto d = u.grid.displacement(idx, center);
    const double s = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    const bool in = s >= lo2 && s <= hi2;
    if (in) ++hits;
    return in;
  });
  if (hits == 0)
    throw std::invalid_argument("lq_norm: annulus contains no lattice point");
  return r;
}

double weak_lq_norm(const PhysicalVectorField& u, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("weak_lq_norm: q must be >= 1");
  return weak_accumulate(u, q, [](std::size_t) { return true; });
}

double weak_lq_norm(const PhysicalVectorField& u, double q,
                    const Annulus& region) {
  if (!(q >= 1.0)) throw std::invalid_argument("weak_lq_norm: q must be >= 1");
  region.validate(u.grid);
  const auto center = region_center(u.grid, region);
  const double lo2 = region.r0 * region.r0;
  const double hi2 = region.r1 * region.r1;
  return weak_accumulate(u, q, [&](std::size_t idx) {
    const auto d = u.grid.displacement(idx, center);
    const double s = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    return s >= lo2 && s <= hi2;
  });
}

double xa_norm(const SpaceTimeField& u, double a, const NormBand& band) {
  u.validate();
  double best = 0.0;
  for (const auto& snap : u.snaps) best = std::max(best, pm_norm(snap, a, band));
  return best;
}

InterpolationReport interpolation_gap(const FourierVectorField& w, double b,
                                      double q, const NormBand& band) {
  const bool low = b >= 0.0 && b < 2.0;
  const bool high = b > 2.0 && b < 3.0;
  if (!low && !high)
    throw std::invalid_argument("interpolation_gap: b must lie in [0,2)∪(2,3)");
  if (low) {
    const double q_lo = 3.0 / (3.0 - b);
    if (!(q > q_lo) || !(q < 3.0) || !(q >= 2.0))
      throw std::invalid_argument(
          "interpolation_gap: for b<2 need q in (3/(3-b),3) with q>=2");
  } else {
    const double q_hi = 3.0 / (3.0 - b);
    if (!(q > 3.0) || !(q < q_hi))
      throw std::invalid_argument(
          "interpolation_gap: for b>2 need q in (3, 3/(3-b))");
  }
  InterpolationReport rep;
  rep.theta = (q - 3.0) / (q * (b - 2.0));
  rep.pm2 = pm_norm(w, 2.0, band);
  rep.pmb = pm_norm(w, b, band);
  rep.lq = lq_norm(to_physical(w), q);
  const double denom =
      std::pow(rep.pm2, 1.0 - rep.theta) * std::pow(rep.pmb, rep.theta);
  rep.ratio = denom > 0.0 ? rep.lq / denom : 0.0;
  return rep;
}

}  // namespace pmflow
