#include <doctest.h>

#include <array>
#include <cmath>

#include "pmflow/landau.hpp"
#include "test_util.hpp"

using namespace pmflow;

namespace {

double vec_diff(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double w = 0.0;
  for (int i = 0; i < 3; ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

double vec_mag(const std::array<double, 3>& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

}  // namespace

TEST_CASE("closed-form field values at hand-checked points") {
  const LandauParams p{2.0};
  // On the axis: r = 1, d = c r - x1 = 1.
  const LandauValue axis = landau_eval(p, {1.0, 0.0, 0.0});
  CHECK(axis.u[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(axis.u[1] == 0.0);
  CHECK(axis.u[2] == 0.0);
  CHECK(axis.p == doctest::Approx(4.0).epsilon(1e-15));
  // Perpendicular: r = 1, d = 2.
  const LandauValue perp = landau_eval(p, {0.0, 1.0, 0.0});
  CHECK(perp.u[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(perp.u[1] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(perp.u[2] == 0.0);
  CHECK(perp.p == doctest::Approx(-1.0).epsilon(1e-15));

  CHECK_THROWS_AS(landau_eval(p, {0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(landau_eval(LandauParams{1.0}, {1.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(landau_eval(LandauParams{-0.5}, {1.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_NOTHROW(landau_eval(LandauParams{-3.0}, {1.0, 0.0, 0.0}));
}

TEST_CASE("velocity is homogeneous of degree -1, pressure of degree -2") {
  const LandauParams p{1.7};
  const std::array<std::array<double, 3>, 3> pts{
      {{0.3, -1.1, 0.4}, {2.0, 0.5, -0.7}, {-0.2, 0.1, 0.9}}};
  for (const auto& x : pts) {
    for (const double lam : {2.0, 0.5, 8.0}) {
      CAPTURE(x[0]);
      CAPTURE(lam);
      const LandauValue v = landau_eval(p, x);
      const LandauValue w =
          landau_eval(p, {lam * x[0], lam * x[1], lam * x[2]});
      for (int i = 0; i < 3; ++i)
        CHECK(w.u[i] == doctest::Approx(v.u[i] / lam).epsilon(1e-13));
      CHECK(w.p == doctest::Approx(v.p / (lam * lam)).epsilon(1e-13));
    }
  }
}

TEST_CASE("field is axisymmetric about the forcing axis") {
  const LandauParams p{2.4};
  const std::array<double, 3> x{0.8, 0.6, -0.3};
  const LandauValue v = landau_eval(p, x);
  for (const double th : {0.7, 2.0, 4.5}) {
    CAPTURE(th);
    const double ct = std::cos(th), st = std::sin(th);
    const std::array<double, 3> y{x[0], ct * x[1] - st * x[2],
                                  st * x[1] + ct * x[2]};
    const LandauValue w = landau_eval(p, y);
    CHECK(w.u[0] == doctest::Approx(v.u[0]).epsilon(1e-13));
    CHECK(w.p == doctest::Approx(v.p).epsilon(1e-13));
    // The transverse velocity rotates with the point.
    CHECK(w.u[1] ==
          doctest::Approx(ct * v.u[1] - st * v.u[2]).epsilon(1e-13));
    CHECK(w.u[2] ==
          doctest::Approx(st * v.u[1] + ct * v.u[2]).epsilon(1e-13));
  }
}

TEST_CASE("force amplitude: odd, monotone, correct limits and values") {
  // Hand value at c = 2: (16 pi / 9)(26 - 18 log 3).
  const double expect2 = 16.0 * pi / 9.0 * (26.0 - 18.0 * std::log(3.0));
  CHECK(landau_beta1(2.0) == doctest::Approx(expect2).epsilon(1e-14));
  CHECK(landau_beta1(2.0) == doctest::Approx(34.766840).epsilon(1e-6));

  CHECK(landau_beta1(-2.0) == doctest::Approx(-landau_beta1(2.0)));

  // Strictly decreasing on (1, inf); by oddness also on (-inf, -1).
  double prev = landau_beta1(1.0 + 1e-6);
  CHECK(prev > 1e5);
  for (const double c : {1.01, 1.1, 1.5, 2.0, 4.0, 10.0, 1e2, 1e4}) {
    CAPTURE(c);
    const double here = landau_beta1(c);
    CHECK(here < prev);
    CHECK(here > 0.0);
    prev = here;
  }
  CHECK(prev < 2e-2);  // beta_1 -> 0 at infinity
  double nprev = landau_beta1(-1e4);
  for (const double c : {-1e2, -10.0, -2.0, -1.1}) {
    CAPTURE(c);
    const double here = landau_beta1(c);
    CHECK(here < nprev);
    nprev = here;
  }

  CHECK_THROWS_AS(landau_beta1(1.0), std::invalid_argument);
  CHECK_THROWS_AS(landau_beta1(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(landau_beta1(0.3), std::invalid_argument);
}

TEST_CASE("amplitude inversion round-trips across the range") {
  for (const double beta : {1e-3, 0.5, 3.0, 34.766840, 3.0e2, 1e5}) {
    CAPTURE(beta);
    const double c = landau_c_from_beta(beta);
    CHECK(c > 1.0);
    CHECK(landau_beta1(c) == doctest::Approx(beta).epsilon(1e-10));
  }
  CHECK(landau_c_from_beta(3.0) == doctest::Approx(16.822511).epsilon(1e-6));
  CHECK(landau_c_from_beta(landau_beta1(2.0)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Odd continuation.
  CHECK(landau_c_from_beta(-3.0) ==
        doctest::Approx(-landau_c_from_beta(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(landau_c_from_beta(0.0), std::invalid_argument);
}

TEST_CASE("stokeslet values and weak-amplitude relaxation") {
  const double beta = 8.0 * pi;
  const auto on_axis = stokeslet_eval(beta, {2.0, 0.0, 0.0});
  CHECK(on_axis[0] == doctest::Approx(1.0).epsilon(1e-15));  // (1/r + 1/r) = 1
  CHECK(on_axis[1] == 0.0);
  const auto off_axis = stokeslet_eval(beta, {0.0, 1.0, 0.0});
  CHECK(off_axis[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(off_axis[1] == 0.0);
  CHECK(off_axis[2] == 0.0);
  CHECK_THROWS_AS(stokeslet_eval(1.0, {0.0, 0.0, 0.0}), std::invalid_argument);

  // As c grows the solution approaches the stokeslet carrying the same net
  // force: the relative gap shrinks with the amplitude.
  const auto rel_gap = [](double c) {
    const double b = landau_beta1(c);
    const std::array<std::array<double, 3>, 4> pts{{{1.0, 0.0, 0.0},
                                                    {0.0, 1.0, 0.0},
                                                    {0.6, -0.8, 0.0},
                                                    {0.5, 0.5, 0.70710678}}};
    double worst = 0.0;
    for (const auto& x : pts) {
      const LandauValue v = landau_eval(LandauParams{c}, x);
      const auto s = stokeslet_eval(b, x);
      worst = std::max(worst, vec_diff(v.u, s) / vec_mag(s));
    }
    return worst;
  };
  const double g10 = rel_gap(10.0), g100 = rel_gap(100.0);
  CHECK(g100 < 0.05);
  CHECK(g100 < g10 / 3.0);
}

TEST_CASE("pointwise residual of the stationary system vanishes at O(h^4)") {
  const LandauParams p{2.0};
  const LandauResidual coarse = landau_residual(p, 1.6e-2);
  const LandauResidual mid = landau_residual(p, 8e-3);
  CHECK(coarse.max_residual > 0.0);
  CHECK(mid.max_residual > 0.0);
  // Richardson-extrapolated stencils: halving h should cut the residual by
  // ~16; demand at least the O(h^2) factor with margin.
  CHECK(coarse.max_residual / mid.max_residual >= 3.5);

  const LandauResidual fine = landau_residual(p, 1e-3);
  CHECK(fine.max_residual <= 1e-5);
  CHECK(fine.max_divergence <= 1e-6);

  CHECK_THROWS_AS(landau_residual(p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(landau_residual(p, 1e-3, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("lattice sampling applies the core mask and minimum image") {
  const GridSpec g = testutil::grid(16, 8.0);
  const LandauParams p{2.0};
  const double core = 1.0;
  const PhysicalVectorField f = landau_sample_grid(p, g, core);
  const double c0 = 0.5 * g.box_length;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const auto d = g.displacement(idx, {c0, c0, c0});
    const double r = vec_mag(d);
    if (r <= core) {
      CHECK(f.magnitude(idx) == 0.0);
    } else {
      const LandauValue v = landau_eval(p, d);
      for (int comp = 0; comp < 3; ++comp)
        CHECK(f.c[comp][idx] == doctest::Approx(v.u[comp]).epsilon(1e-14));
    }
  }
}
