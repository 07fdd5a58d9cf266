#pragma once

// Adaptive Gauss-Kronrod (15/7) quadrature used by the Riesz-constant,
// moment-majorant and principal-value pairing code. Globally adaptive:
// segments live in a worst-error heap, so integrable endpoint singularities
// (|x - x0|^{-s}, s < 1, and log|x|) converge without special casing as long
// as the singular point is a segment endpoint (Kronrod nodes are interior).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace pmflow {

struct QuadratureControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_intervals = 8000;
};

namespace detail {

// 15-point Kronrod nodes on [-1,1] (positive half; symmetric), with the
// embedded 7-point Gauss rule on the odd-indexed nodes.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGk15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGk15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 7; ++i) {
    fk[i] = f(c - h * kGk15Nodes[i]);
    fk[14 - i] = f(c + h * kGk15Nodes[i]);
  }
  fk[7] = f(c);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 7; ++i) {
    k += kGk15WeightsK[i] * (fk[i] + fk[14 - i]);
    if (i % 2 == 1) g += kGk15WeightsG[i / 2] * (fk[i] + fk[14 - i]);
  }
  k += kGk15WeightsK[7] * fk[7];
  g += kGk15WeightsG[3] * fk[7];
  result = k * h;
  // Scaled |K-G| error estimate (QUADPACK-style damping).
  const double diff = std::abs(k - g) * std::abs(h);
  error = diff;
  if (result != 0.0) {
    const double scale = std::pow(200.0 * diff / std::abs(result), 1.5);
    if (scale < 1.0) error = std::abs(result) * scale;
  }
}

struct QuadSegment {
  double a, b, value, error;
  bool operator<(const QuadSegment& o) const { return error < o.error; }
};

}  // namespace detail

// Integrate f over [a, b]. Returns the estimate once the summed segment
// error drops below max(abs_tol, rel_tol*|I|) or the segment budget is spent
// (in which case the best estimate so far is returned; these integrands are
// all absolutely integrable so this degrades gracefully).
template <class F>
double integrate(const F& f, double a, double b,
                 const QuadratureControls& ctl = {}) {
  if (!(b > a)) {
    if (a == b) return 0.0;
    return -integrate(f, b, a, ctl);
  }
  std::priority_queue<detail::QuadSegment> heap;
  double total = 0.0, total_err = 0.0;
  detail::QuadSegment s{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, s.value, s.error);
  total = s.value;
  total_err = s.error;
  heap.push(s);
  int used = 1;
  while (total_err > std::max(ctl.abs_tol, ctl.rel_tol * std::abs(total)) &&
         used < ctl.max_intervals && !heap.empty()) {
    detail::QuadSegment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // interval exhausted
    detail::QuadSegment left{worst.a, mid, 0.0, 0.0};
    detail::QuadSegment right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++used;
  }
  return total;
}

// Integrate across a list of interior breakpoints (singular points of f
// should be listed so they always land on segment boundaries).
template <class F>
double integrate_with_breakpoints(const F& f, std::vector<double> pts,
                                  const QuadratureControls& ctl = {}) {
  if (pts.size() < 2) throw std::invalid_argument("need at least two points");
  std::sort(pts.begin(), pts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sum += integrate(f, pts[i], pts[i + 1], ctl);
  return sum;
}

// Integrate f over [a, inf) via x = a + t/(1-t), t in [0,1).
template <class F>
double integrate_half_line(const F& f, double a,
                           const QuadratureControls& ctl = {}) {
  auto g = [&](double t) {
    const double om = 1.0 - t;
    const double x = a + t / om;
    return f(x) / (om * om);
  };
  return integrate(g, 0.0, 1.0, ctl);
}

}  // namespace pmflow
