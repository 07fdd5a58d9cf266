#include "pmflow/landau.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmflow/detail/threading.hpp"

namespace pmflow {

void LandauParams::validate() const {
  if (!(std::abs(c) > 1.0))
    throw std::invalid_argument("LandauParams: need |c| > 1");
}

LandauValue landau_eval(const LandauParams& params,
                        const std::array<double, 3>& x) {
  params.validate();
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (!(r2 > 0.0))
    throw std::invalid_argument("landau_eval: singular at the origin");
  const double r = std::sqrt(r2);
  const double c = params.c;
  const double d = c * r - x[0];  // |c| > 1 keeps this away from zero
  const double denom = r * d * d;
  LandauValue v;
  v.u[0] = 2.0 * (c * r2 - 2.0 * x[0] * r + c * x[0] * x[0]) / denom;
  v.u[1] = 2.0 * x[1] * (c * x[0] - r) / denom;
  v.u[2] = 2.0 * x[2] * (c * x[0] - r) / denom;
  v.p = 4.0 * (c * x[0] - r) / denom;
  return v;
}

double landau_beta1(double c) {
  if (!(std::abs(c) > 1.0))
    throw std::invalid_argument("landau_beta1: need |c| > 1");
  if (c < 0.0) return -landau_beta1(-c);
  double bracket;
  if (c >= 2.0) {
    // 2 + 6c^2 - 3c(c^2-1)log((c+1)/(c-1)) cancels catastrophically once
    // 6c^2 dwarfs the result; expand log via atanh(1/c) instead:
    // bracket = 6 + 12 sum_{k>=1} c^{-2k} / ((2k+1)(2k+3)).
    const double u2 = 1.0 / (c * c);
    double term = u2, sum = 0.0;
    for (int k = 1; k < 80; ++k) {
      const double add = term / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
      sum += add;
      if (add < 1e-18 * sum) break;
      term *= u2;
    }
    bracket = 6.0 + 12.0 * sum;
  } else {
    const double lg = std::log1p(2.0 / (c - 1.0));
    bracket = 2.0 + 6.0 * c * c - 3.0 * c * (c * c - 1.0) * lg;
  }
  return 8.0 * pi * c / (3.0 * (c * c - 1.0)) * bracket;
}

double landau_c_from_beta(double beta) {
  if (beta == 0.0)
    throw std::invalid_argument("landau_c_from_beta: beta must be nonzero");
  if (beta < 0.0) return -landau_c_from_beta(-beta);
  // beta_1 decreases from +inf at c=1+ to 0 at infinity: bracket then bisect
  // with a secant refinement.
  double lo = 1.0 + 1e-12, hi = 2.0;
  while (landau_beta1(hi) > beta) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (landau_beta1(mid) > beta)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

std::array<double, 3> stokeslet_eval(double beta,
                                     const std::array<double, 3>& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (!(r2 > 0.0))
    throw std::invalid_argument("stokeslet_eval: singular at the origin");
  const double r = std::sqrt(r2);
  const double pref = beta / (8.0 * pi);
  return {pref * (1.0 / r + x[0] * x[0] / (r * r2)),
          pref * (x[1] * x[0] / (r * r2)),
          pref * (x[2] * x[0] / (r * r2))};
}

namespace {

std::vector<std::array<double, 3>> fibonacci_sphere(int n) {
  std::vector<std::array<double, 3>> dirs;
  dirs.reserve(n);
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return dirs;
}

struct Derivs {
  std::array<std::array<double, 3>, 3> du{};   // du[i][j] = d_i U_j
  std::array<std::array<double, 3>, 3> d2u{};  // d2u[i][j] = d_i d_i U_j
  std::array<double, 3> dp{};
};

// Richardson-extrapolated central differences: D(h/2) refined against D(h)
// cancels the O(h^2) term, leaving O(h^4).
Derivs differentiate(const LandauParams& params, const std::array<double, 3>& x,
                     double h) {
  Derivs out;
  for (int axis = 0; axis < 3; ++axis) {
    std::array<double, 3> xp = x, xm = x, xph = x, xmh = x;
    xp[axis] += h;
    xm[axis] -= h;
    xph[axis] += 0.5 * h;
    xmh[axis] -= 0.5 * h;
    const LandauValue vp = landau_eval(params, xp);
    const LandauValue vm = landau_eval(params, xm);
    const LandauValue vph = landau_eval(params, xph);
    const LandauValue vmh = landau_eval(params, xmh);
    const LandauValue v0 = landau_eval(params, x);
    for (int j = 0; j < 3; ++j) {
      const double d1_h = (vp.u[j] - vm.u[j]) / (2.0 * h);
      const double d1_h2 = (vph.u[j] - vmh.u[j]) / h;
      out.du[axis][j] = (4.0 * d1_h2 - d1_h) / 3.0;
      const double d2_h = (vp.u[j] - 2.0 * v0.u[j] + vm.u[j]) / (h * h);
      const double d2_h2 =
          (vph.u[j] - 2.0 * v0.u[j] + vmh.u[j]) / (0.25 * h * h);
      out.d2u[axis][j] = (4.0 * d2_h2 - d2_h) / 3.0;
    }
    const double dp_h = (vp.p - vm.p) / (2.0 * h);
    const double dp_h2 = (vph.p - vmh.p) / h;
    out.dp[axis] = (4.0 * dp_h2 - dp_h) / 3.0;
  }
  return out;
}

}  // namespace

LandauResidual landau_residual(const LandauParams& params, double h,
                               double r_inner, double r_outer) {
  params.validate();
  if (!(h > 0.0) || !(r_inner > 0.0) || !(r_outer > r_inner))
    throw std::invalid_argument("landau_residual: bad parameters");
  const auto dirs = fibonacci_sphere(24);
  const int radial = 6;
  LandauResidual res;
  for (int ir = 0; ir < radial; ++ir) {
    const double r = (r_inner * 1.05) *
                     std::pow((r_outer * 0.95) / (r_inner * 1.05),
                              static_cast<double>(ir) / (radial - 1));
    for (const auto& d : dirs) {
      const std::array<double, 3> x{r * d[0], r * d[1], r * d[2]};
      const LandauValue v = landau_eval(params, x);
      const Derivs dv = differentiate(params, x, h);
      double div = 0.0;
      for (int i = 0; i < 3; ++i) div += dv.du[i][i];
      res.max_divergence = std::max(res.max_divergence, std::abs(div));
      for (int j = 0; j < 3; ++j) {
        double lap = 0.0, adv = 0.0;
        for (int i = 0; i < 3; ++i) {
          lap += dv.d2u[i][j];
          adv += v.u[i] * dv.du[i][j];
        }
        const double r_j = -lap + adv + dv.dp[j];
        res.max_residual = std::max(res.max_residual, std::abs(r_j));
      }
    }
  }
  return res;
}

PhysicalVectorField landau_sample_grid(const LandauParams& params,
                                       const GridSpec& grid,
                                       double core_radius) {
  params.validate();
  grid.validate();
  PhysicalVectorField out = PhysicalVectorField::zeros(grid);
  const double c0 = 0.5 * grid.box_length;
  const std::array<double, 3> center{c0, c0, c0};
  detail::parallel_for(0, grid.size(), [&](std::size_t idx) {
    const auto d = grid.displacement(idx, center);
    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    if (r2 <= core_radius * core_radius || r2 == 0.0) return;
    const LandauValue v = landau_eval(params, d);
    for (int comp = 0; comp < 3; ++comp) out.c[comp][idx] = v.u[comp];
  });
  return out;
}

}  // namespace pmflow
