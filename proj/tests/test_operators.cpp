#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "pmflow/forces.hpp"
#include "pmflow/operators.hpp"
#include "pmflow/pm_norms.hpp"
#include "pmflow/time_grid.hpp"
#include "test_util.hpp"

using namespace pmflow;

namespace {

const double kInv2Pi32 = std::pow(2.0 * pi, -1.5);

// Apply the continuum projector I - xi xi^T/|xi|^2 to a constant vector.
std::array<cplx, 3> project(const std::array<double, 3>& xi,
                            const std::array<cplx, 3>& v) {
  const double s = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  if (s == 0.0) return {cplx(0.0), cplx(0.0), cplx(0.0)};
  const cplx dot = xi[0] * v[0] + xi[1] * v[1] + xi[2] * v[2];
  return {v[0] - xi[0] * dot / s, v[1] - xi[1] * dot / s,
          v[2] - xi[2] * dot / s};
}

TimeGrid uniform_times(int m, double t_max) {
  TimeGrid g;
  for (int j = 1; j <= m; ++j) g.nodes.push_back(t_max * j / m);
  return g;
}

// Simpson rule on a uniform grid (n even).
template <class F>
double simpson(const F& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("heat propagator: mode-wise decay, identity at t = 0") {
  const GridSpec g = testutil::grid(32);
  const FourierVectorField u = testutil::random_shell_field(g, 11);
  const FourierVectorField w = heat_propagate(u, 0.7);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double damp = std::exp(-0.7 * g.xi_norm_sq(i));
      worst = std::max(worst, std::abs(w.c[c][i] - damp * u.c[c][i]));
    }
  CHECK(worst <= 1e-15);
  CHECK(testutil::max_mode_difference(heat_propagate(u, 0.0), u) == 0.0);
  CHECK_THROWS_AS(heat_propagate(u, -1e-9), std::invalid_argument);
}

TEST_CASE("heat decay in pseudomeasure norms attains the sharp constant") {
  const GridSpec g = testutil::grid(32);
  const NormBand band = NormBand::default_for(g);
  const double delta = 1.3;
  const auto u = testutil::single_mode_field(g, {3, 2, 1},
                                             {cplx(0.6, 0.8), cplx(0.0),
                                              cplx(0.0)});
  const double s = 14.0 * g.dxi() * g.dxi();  // |xi|^2 of the excited mode
  const double low = pm_norm(u, 2.0, band);
  const double c_sharp = heat_decay_constant(delta);

  // The heat flow trades t^{-delta/2} for delta extra frequency weight:
  // t^{delta/2} pm_{2+delta}(e^{t Delta} u) / pm_2(u) = (t s)^{delta/2}
  // e^{-t s} for a single mode, maximal at t s = delta / 2 where it equals
  // the sharp constant exactly.
  const double t_star = 0.5 * delta / s;
  const double ratio_star =
      std::pow(t_star, 0.5 * delta) *
      pm_norm(heat_propagate(u, t_star), 2.0 + delta, band) / low;
  CHECK(ratio_star == doctest::Approx(c_sharp).epsilon(1e-12));
  for (const double t : {0.2 * t_star, 0.6 * t_star, 3.0 * t_star}) {
    CAPTURE(t);
    const double ratio = std::pow(t, 0.5 * delta) *
                         pm_norm(heat_propagate(u, t), 2.0 + delta, band) /
                         low;
    CHECK(ratio < c_sharp);
  }
}

TEST_CASE("leray projection: idempotent, kills gradients, fixes solenoidal") {
  const GridSpec g = testutil::grid(32);
  const FourierVectorField u = testutil::random_shell_field(g, 5);
  const FourierVectorField pu = leray_project(u);
  const double scale = testutil::max_abs(u);

  CHECK(pu.divergence_free);
  CHECK(testutil::max_mode_difference(leray_project(pu), pu) <= 1e-14 * scale);

  // xi . (P u) = 0 mode-wise, and the zero mode is annihilated.
  double div_worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.xi(i);
    const cplx dot =
        xi[0] * pu.c[0][i] + xi[1] * pu.c[1][i] + xi[2] * pu.c[2][i];
    div_worst = std::max(div_worst, std::abs(dot));
  }
  CHECK(div_worst <= 1e-12 * scale);
  FourierVectorField z = u;
  for (int c = 0; c < 3; ++c) z.c[c][0] = cplx(5.0, -1.0);
  const FourierVectorField pz = leray_project(z);
  for (int c = 0; c < 3; ++c) CHECK(pz.c[c][0] == cplx(0.0, 0.0));

  // Gradient symbols i xi phi(xi) vanish under the projection.
  FourierVectorField grad = FourierVectorField::zeros(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.xi(i);
    const double phi = std::exp(-0.25 * g.xi_norm_sq(i));
    for (int c = 0; c < 3; ++c) grad.c[c][i] = cplx(0.0, xi[c] * phi);
  }
  CHECK(testutil::max_abs(leray_project(grad)) <= 1e-14);

  // Already-solenoidal fields are fixed points.
  const FourierVectorField w = testutil::random_divfree_field(g, 23);
  CHECK(testutil::max_mode_difference(leray_project(w), w) <=
        1e-14 * testutil::max_abs(w));
}

TEST_CASE("nonlinear term matches the two-mode convolution closed form") {
  const GridSpec g = testutil::grid(32);
  const double d3 = std::pow(g.dxi(), 3);

  // Hermitian pairs at ka and kb; the only contribution at ka + kb is
  // -i (xi . A) P B (2pi)^{-3/2} dxi^3.
  const std::array<int, 3> ka{1, 2, 0}, kb{3, -1, 1}, kc{4, 1, 1};
  const std::array<cplx, 3> A{cplx(0.4, -0.3), cplx(-1.0, 0.2), cplx(0.0, 1.1)};
  const std::array<cplx, 3> B{cplx(-0.7, 0.5), cplx(0.3, 0.0), cplx(1.0, -0.4)};
  FourierVectorField u = FourierVectorField::zeros(g);
  FourierVectorField v = FourierVectorField::zeros(g);
  const auto put = [&](FourierVectorField& f, const std::array<int, 3>& k,
                       const std::array<cplx, 3>& val) {
    const std::size_t i =
        g.index(g.k_to_index(k[0]), g.k_to_index(k[1]), g.k_to_index(k[2]));
    const std::size_t mi = g.index(g.k_to_index(-k[0]), g.k_to_index(-k[1]),
                                   g.k_to_index(-k[2]));
    for (int c = 0; c < 3; ++c) {
      f.c[c][i] = val[std::size_t(c)];
      f.c[c][mi] = std::conj(val[std::size_t(c)]);
    }
  };
  put(u, ka, A);
  put(v, kb, B);

  const FourierVectorField n = nonlinear_term(u, v);
  const std::size_t ic =
      g.index(g.k_to_index(kc[0]), g.k_to_index(kc[1]), g.k_to_index(kc[2]));
  const auto xic = g.xi(ic);
  const cplx xa = xic[0] * A[0] + xic[1] * A[1] + xic[2] * A[2];
  const std::array<cplx, 3> pb = project(xic, B);
  double worst = 0.0, scale = 0.0;
  for (int c = 0; c < 3; ++c) {
    const cplx expect = -cplx(0.0, 1.0) * xa * pb[std::size_t(c)] *
                        kInv2Pi32 * d3;
    worst = std::max(worst, std::abs(n.c[c][ic] - expect));
    scale = std::max(scale, std::abs(expect));
  }
  CHECK(scale > 0.0);
  CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("nonlinear term: bilinear, solenoidal, dealiased, zero-mode free") {
  const GridSpec g = testutil::grid(32);
  const FourierVectorField u1 = testutil::random_divfree_field(g, 31);
  const FourierVectorField u2 = testutil::random_divfree_field(g, 32);
  const FourierVectorField v = testutil::random_divfree_field(g, 33);

  // Additivity in the first argument.
  FourierVectorField sum = FourierVectorField::zeros(g);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i)
      sum.c[c][i] = u1.c[c][i] + 2.0 * u2.c[c][i];
  const FourierVectorField lhs = nonlinear_term(sum, v);
  const FourierVectorField n1 = nonlinear_term(u1, v);
  const FourierVectorField n2 = nonlinear_term(u2, v);
  double worst = 0.0, scale = testutil::max_abs(lhs);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst, std::abs(lhs.c[c][i] - n1.c[c][i] -
                                       2.0 * n2.c[c][i]));
  CHECK(worst <= 1e-12 * scale);

  // Structure of the output.
  CHECK(lhs.divergence_free);
  for (int c = 0; c < 3; ++c) CHECK(lhs.c[c][0] == cplx(0.0, 0.0));
  double div_worst = 0.0, alias_worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.xi(i);
    const cplx dot =
        xi[0] * lhs.c[0][i] + xi[1] * lhs.c[1][i] + xi[2] * lhs.c[2][i];
    div_worst = std::max(div_worst, std::abs(dot));
    if (!g.keep_mode(g.mode(i)))
      for (int c = 0; c < 3; ++c)
        alias_worst = std::max(alias_worst, std::abs(lhs.c[c][i]));
  }
  CHECK(div_worst <= 1e-12 * scale);
  CHECK(alias_worst == 0.0);

  // The same-argument fast path agrees with a distinct-copy evaluation.
  const FourierVectorField copy = u1;
  CHECK(testutil::max_mode_difference(nonlinear_term(u1, u1),
                                      nonlinear_term(u1, copy)) <=
        1e-14 * testutil::max_abs(nonlinear_term(u1, u1)));

  const GridSpec other = testutil::grid(16);
  CHECK_THROWS_AS(
      nonlinear_term(u1, FourierVectorField::zeros(other)),
      std::invalid_argument);
}

TEST_CASE("first-segment profile integral: branches and identities") {
  // Exact elementary forms.
  for (const double z : {0.05, 0.3, 3.0, 24.0, 60.0}) {
    CAPTURE(z);
    CHECK(duhamel_profile_integral(0.0, z) ==
          doctest::Approx(-std::expm1(-z) / z).epsilon(1e-13));
    CHECK(duhamel_profile_integral(1.0, z) ==
          doctest::Approx((z - 1.0 + std::exp(-z)) / (z * z)).epsilon(1e-12));
  }
  CHECK(duhamel_profile_integral(2.3, 0.0) ==
        doctest::Approx(1.0 / 3.3).epsilon(1e-15));

  // Quadrature oracle via s = y^2 (regularizes p < 0):
  // J_p(z) = 2 int_0^1 e^{-z(1-y^2)} y^{2p+1} dy.
  for (const double p : {-0.5, 0.5, 2.3}) {
    for (const double z : {0.2, 4.0, 40.0}) {
      CAPTURE(p);
      CAPTURE(z);
      auto f = [&](double y) {
        return 2.0 * std::exp(-z * (1.0 - y * y)) * std::pow(y, 2.0 * p + 1.0);
      };
      const double oracle = simpson(f, 0.0, 1.0, 40000);
      CHECK(duhamel_profile_integral(p, z) ==
            doctest::Approx(oracle).epsilon(1e-9));
    }
  }

  CHECK_THROWS_AS(duhamel_profile_integral(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(duhamel_profile_integral(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("bilinear duhamel integral is exact for constant histories") {
  const GridSpec g = testutil::grid(16, 8.0);
  const FourierVectorField w = testutil::random_divfree_field(g, 77, 1, 16);
  SpaceTimeField u;
  u.times = TimeGrid::geometric(0.05, 2.0, std::sqrt(2.0));
  for (std::size_t m = 0; m < u.times.nodes.size(); ++m) u.snaps.push_back(w);

  const SpaceTimeField b = duhamel_nonlinear_history(u, u);
  CHECK(b.leading_power == 1.0);
  const FourierVectorField n = nonlinear_term(w, w);
  const double scale = testutil::max_abs(n);
  for (std::size_t m = 0; m < b.snaps.size(); ++m) {
    CAPTURE(m);
    const double t = b.times.nodes[m];
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = g.xi_norm_sq(i);
        const cplx expect =
            s == 0.0 ? cplx(0.0) : n.c[c][i] * (-std::expm1(-t * s) / s);
        worst = std::max(worst, std::abs(b.snaps[m].c[c][i] - expect));
      }
    CHECK(worst <= 1e-12 * scale);
  }

  // Point evaluation agrees with the history and rejects off-node times.
  const double t3 = u.times.nodes[3];
  CHECK(testutil::max_mode_difference(duhamel_nonlinear(u, u, t3),
                                      b.snaps[3]) == 0.0);
  CHECK_THROWS_AS(duhamel_nonlinear(u, u, 0.1234), std::invalid_argument);

  // Mismatched inputs are rejected.
  SpaceTimeField v = u;
  v.times.nodes.back() *= 1.5;
  CHECK_THROWS_AS(duhamel_nonlinear_history(u, v), std::invalid_argument);
}

TEST_CASE("forced duhamel integral: closed forms vs segment recursion") {
  const GridSpec g = testutil::grid(16, 8.0);
  const TimeGrid times = TimeGrid::geometric(0.01, 1.0, std::pow(2.0, 0.25));
  const double t = times.nodes.back();

  // Constant force: closed form -expm1(-t s)/s (projected); recursion exact.
  const ForceSpec dirac{DiracForce{{1.0, -0.5, 2.0}}};
  const FourierVectorField closed =
      duhamel_force(dirac, t, g, times, DuhamelPath::closed_form);
  const FourierVectorField proj =
      leray_project(force_symbol(dirac, g, 0.0));
  double worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = g.xi_norm_sq(i);
      const cplx expect =
          s == 0.0 ? cplx(0.0) : proj.c[c][i] * (-std::expm1(-t * s) / s);
      worst = std::max(worst, std::abs(closed.c[c][i] - expect));
    }
  CHECK(worst <= 1e-14);
  const FourierVectorField quad =
      duhamel_force(dirac, t, g, times, DuhamelPath::quadrature);
  CHECK(testutil::max_mode_difference(closed, quad) <=
        1e-12 * testutil::max_abs(closed));

  // Linear power modulation is piecewise-linear, so the recursion is exact.
  auto table = std::make_shared<FourierVectorField>(
      testutil::random_divfree_field(g, 3, 1, 16));
  const ForceSpec ramp{
      BandLimitedForce{table, BandLimitedForce::Modulation::power, 1.0}};
  const FourierVectorField ramp_closed =
      duhamel_force(ramp, t, g, times, DuhamelPath::closed_form);
  const FourierVectorField ramp_quad =
      duhamel_force(ramp, t, g, times, DuhamelPath::quadrature);
  CHECK(testutil::max_mode_difference(ramp_closed, ramp_quad) <=
        1e-12 * testutil::max_abs(ramp_closed));
  // And the closed form itself is t^2 J_1(t s) against the projected table.
  const FourierVectorField ptab = leray_project(*table);
  worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const cplx expect = ptab.c[c][i] * t * t *
                          duhamel_profile_integral(1.0, t * g.xi_norm_sq(i));
      worst = std::max(worst, std::abs(ramp_closed.c[c][i] - expect));
    }
  CHECK(worst <= 1e-13 * testutil::max_abs(ramp_closed));

  // t = 0 is the zero field; off-node times are rejected on the quadrature
  // path; closed_form demands an analytic force.
  CHECK(testutil::max_abs(duhamel_force(dirac, 0.0, g, times)) == 0.0);
  CHECK_THROWS_AS(duhamel_force(dirac, 0.123, g, times,
                                DuhamelPath::quadrature),
                  std::invalid_argument);
  const ForceSpec moving{MovingDiracForce{
      {0.0, 2.0, 0.0},
      TrajectorySpec{TrajectorySpec::Kind::linear_drift, {1.0, 0.0, 0.0}}}};
  CHECK_THROWS_AS(duhamel_force(moving, t, g, times, DuhamelPath::closed_form),
                  std::invalid_argument);
}

TEST_CASE("segment recursion converges at second order on smooth forces") {
  const GridSpec g = testutil::grid(16, 8.0);

  // Heat-modulated flat symbol: reference is the exact t e^{-t s} form.
  auto table = std::make_shared<FourierVectorField>(
      testutil::random_divfree_field(g, 9, 1, 16));
  const ForceSpec heated{
      BandLimitedForce{table, BandLimitedForce::Modulation::heat, 0.0}};
  const auto heat_err = [&](int m) {
    const TimeGrid tg = uniform_times(m, 1.0);
    const FourierVectorField exact =
        duhamel_force(heated, 1.0, g, tg, DuhamelPath::closed_form);
    const FourierVectorField approx =
        duhamel_force(heated, 1.0, g, tg, DuhamelPath::quadrature);
    return testutil::max_mode_difference(exact, approx);
  };
  const double he1 = heat_err(16), he2 = heat_err(32);
  CHECK(he1 > 0.0);
  const double heat_ratio = he1 / he2;
  CHECK(heat_ratio >= 2.5);
  CHECK(heat_ratio <= 6.0);

  // Moving point mass with linear drift: reference is the per-mode formula
  // (e^{-i w t} - e^{-t s}) / (s - i w), w = xi . velocity.
  const std::array<double, 3> beta{0.0, 2.0, 0.0};
  const std::array<double, 3> vel{1.0, 0.0, 0.0};
  const ForceSpec moving{MovingDiracForce{
      beta, TrajectorySpec{TrajectorySpec::Kind::linear_drift, vel}}};
  FourierVectorField exact = FourierVectorField::zeros(g);
  const double t = 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.xi(i);
    const double s = g.xi_norm_sq(i);
    if (s == 0.0) continue;
    const auto pb = project(
        xi, {cplx(beta[0]), cplx(beta[1]), cplx(beta[2])});
    const double w = xi[0] * vel[0] + xi[1] * vel[1] + xi[2] * vel[2];
    const cplx factor = (std::polar(1.0, -w * t) - std::exp(-t * s)) /
                        cplx(s, -w);
    for (int c = 0; c < 3; ++c)
      exact.c[c][i] = kInv2Pi32 * factor * pb[std::size_t(c)];
  }
  const auto moving_err = [&](int m) {
    const TimeGrid tg = uniform_times(m, t);
    return testutil::max_mode_difference(
        exact, duhamel_force(moving, t, g, tg, DuhamelPath::automatic));
  };
  const double me1 = moving_err(16), me2 = moving_err(32);
  CHECK(me1 > 0.0);
  const double moving_ratio = me1 / me2;
  CHECK(moving_ratio >= 2.5);
  CHECK(moving_ratio <= 6.0);

  // History evaluation agrees with per-node evaluation.
  const TimeGrid tg = uniform_times(8, t);
  const SpaceTimeField hist = duhamel_force_history(moving, g, tg);
  for (const std::size_t m : {std::size_t(0), std::size_t(3), std::size_t(7)}) {
    CAPTURE(m);
    CHECK(testutil::max_mode_difference(
              hist.snaps[m],
              duhamel_force(moving, tg.nodes[m], g, tg)) <=
          1e-13 * testutil::max_abs(hist.snaps[m]));
  }
}

TEST_CASE("riesz product constant matches the gamma-function evaluation") {
  const auto oracle = [](double b) {
    return pi * pi * std::tgamma(0.5 * (3.0 - b)) *
           std::tgamma(0.5 * (b - 1.0)) /
           (std::tgamma(0.5 * b) * std::tgamma(0.5 * (4.0 - b)));
  };
  for (double b = 1.05; b < 2.951; b += 0.05) {
    CAPTURE(b);
    CHECK(riesz_constant(b) ==
          doctest::Approx(oracle(b)).epsilon(1e-9));
  }
  CHECK(riesz_constant(2.0) == doctest::Approx(pi * pi * pi).epsilon(1e-12));
  CHECK(riesz_constant(1.5) ==
        doctest::Approx(4.0 * pi * pi).epsilon(1e-12));
  CHECK(riesz_constant(2.5) ==
        doctest::Approx(4.0 * pi * pi).epsilon(1e-12));
  // Symmetry under b <-> 4 - b and endpoint blow-up.
  CHECK(riesz_constant(1.3) ==
        doctest::Approx(riesz_constant(2.7)).epsilon(1e-11));
  CHECK(riesz_constant(1.001) > 1e3);
  CHECK(riesz_constant(2.999) > 1e3);
  CHECK_THROWS_AS(riesz_constant(1.0), std::invalid_argument);
  CHECK_THROWS_AS(riesz_constant(3.0), std::invalid_argument);
  CHECK_THROWS_AS(riesz_constant(0.5), std::invalid_argument);
}

TEST_CASE("stationary lift and bilinear map") {
  const GridSpec g = testutil::grid(32);
  const std::array<double, 3> beta{0.0, 0.0, 2.0};
  const ForceSpec f{DiracForce{beta}};
  const FourierVectorField lift = stationary_lift(f, g);
  CHECK(lift.divergence_free);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.xi_norm_sq(i);
    const auto pb = project(g.xi(i),
                            {cplx(beta[0]), cplx(beta[1]), cplx(beta[2])});
    for (int c = 0; c < 3; ++c) {
      const cplx expect =
          s == 0.0 ? cplx(0.0) : kInv2Pi32 * pb[std::size_t(c)] / s;
      worst = std::max(worst, std::abs(lift.c[c][i] - expect));
    }
  }
  CHECK(worst <= 1e-14);

  const ForceSpec moving{MovingDiracForce{
      beta, TrajectorySpec{TrajectorySpec::Kind::sqrt_drift, {1.0, 0.0, 0.0}}}};
  CHECK_THROWS_AS(stationary_lift(moving, g), std::invalid_argument);

  // B_E(w,z) is the advection symbol divided by |xi|^2.
  const FourierVectorField w = testutil::random_divfree_field(g, 41);
  const FourierVectorField z = testutil::random_divfree_field(g, 42);
  const FourierVectorField be = stationary_bilinear(w, z);
  const FourierVectorField n = nonlinear_term(w, z);
  worst = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = g.xi_norm_sq(i);
      const cplx expect = s == 0.0 ? cplx(0.0) : n.c[c][i] / s;
      worst = std::max(worst, std::abs(be.c[c][i] - expect));
    }
  CHECK(worst <= 1e-14 * testutil::max_abs(be));
}

TEST_CASE("heated point mass: weighted duhamel norm attains its constant") {
  // F(t) = t e^{t Delta} P f0 for a heat-mollified point mass, so
  // t^{delta/2} |xi|^{2+delta} |F| <= ((2+delta)/2)^{1+delta/2}
  // e^{-(2+delta)/2} |P f0|, with equality at t |xi|^2 = 1 + delta/2.
  const GridSpec g = testutil::grid(48, 16.0);
  const NormBand band = NormBand::default_for(g);
  const double delta = 1.3;
  auto flat = std::make_shared<FourierVectorField>(FourierVectorField::zeros(g));
  for (auto& v : flat->c[0]) v = cplx(kInv2Pi32, 0.0);
  const ForceSpec heated{
      BandLimitedForce{flat, BandLimitedForce::Modulation::heat, 0.0}};
  const TimeGrid times = TimeGrid::geometric(0.1, 2.0, 2.0);

  const double e = 1.0 + 0.5 * delta;
  const double c_sharp = std::pow(e, e) * std::exp(-e);
  double best = 0.0;
  for (const double t : {0.12, 0.3, 0.8, 1.6}) {
    CAPTURE(t);
    const FourierVectorField ft = duhamel_force(heated, t, g, times);
    const double weighted = std::pow(t, 0.5 * delta) *
                            pm_norm(ft, 2.0 + delta, band) / kInv2Pi32;
    CHECK(weighted <= c_sharp * (1.0 + 1e-9));
    best = std::max(best, weighted);
  }
  CHECK(best >= 0.95 * c_sharp);
}
