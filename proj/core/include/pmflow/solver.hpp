#pragma once

// Picard iteration for quadratic fixed-point equations x = y + L x + B(x,x),
// with a certificate recording the measured linear gain, quadratic gain and
// residual history, plus the concrete Cauchy and stationary solvers built on
// top of it.

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmflow/operators.hpp"
#include "pmflow/pm_norms.hpp"

namespace pmflow {

struct PicardCertificate {
  double y_norm = 0.0;
  double lambda = 0.0;  // max observed ||L x|| / ||x||
  double eta = 0.0;     // max observed ||B(x,x)|| / ||x||^2
  bool smallness_ok = false;          // 4 eta ||y|| < (1-lambda)^2
  double bound_norm = 0.0;            // 2 ||y|| / (1-lambda)
  double uniqueness_radius = 0.0;     // (1-lambda) / (2 eta)
  double predicted_ratio = 0.0;       // 4 eta ||y|| / (1-lambda)^2
  double max_observed_ratio = 0.0;    // max residual quotient
  double a_posteriori_residual = 0.0; // distance(step(x*), x*)
  std::vector<double> residuals;
  int iterations = 0;
  bool converged = false;
};

class PicardError : public std::runtime_error {
 public:
  PicardError(const std::string& what, PicardCertificate cert)
      : std::runtime_error(what), certificate(std::move(cert)) {}
  PicardCertificate certificate;
};

struct PicardOptions {
  double tol = 1e-9;        // absolute, in the problem's distance metric
  int max_iterations = 60;
};

// One application of the fixed-point map, with the norms of the applied
// parts measured inside (so implementations can reuse buffers).
template <class X>
struct PicardStep {
  X next;
  double linear_norm = 0.0;    // ||L x||, 0 when no linear part
  double bilinear_norm = 0.0;  // ||B(x,x)||
};

template <class X>
struct PicardProblem {
  X y;
  std::function<PicardStep<X>(const X&)> step;       // x -> y + L x + B(x,x)
  std::function<double(const X&)> norm;
  std::function<double(const X&, const X&)> distance;
};

template <class X>
struct PicardResult {
  X solution;
  PicardCertificate certificate;
};

template <class X>
PicardResult<X> picard_fixed_point(const PicardProblem<X>& prob,
                                   const PicardOptions& opt = {}) {
  PicardCertificate cert;
  cert.y_norm = prob.norm(prob.y);

  X x = prob.y;
  double prev_residual = -1.0;
  int rising = 0;

  auto finalize_bounds = [&]() {
    cert.smallness_ok = cert.lambda < 1.0 &&
                        4.0 * cert.eta * cert.y_norm <
                            (1.0 - cert.lambda) * (1.0 - cert.lambda);
    cert.bound_norm =
        cert.lambda < 1.0 ? 2.0 * cert.y_norm / (1.0 - cert.lambda) : 0.0;
    cert.uniqueness_radius =
        cert.eta > 0.0 && cert.lambda < 1.0
            ? (1.0 - cert.lambda) / (2.0 * cert.eta)
            : std::numeric_limits<double>::infinity();
    cert.predicted_ratio =
        cert.lambda < 1.0 ? 4.0 * cert.eta * cert.y_norm /
                                ((1.0 - cert.lambda) * (1.0 - cert.lambda))
                          : std::numeric_limits<double>::infinity();
  };

  for (int k = 0; k < opt.max_iterations; ++k) {
    const double nx = prob.norm(x);
    PicardStep<X> s = prob.step(x);
    if (nx > 0.0) {
      cert.lambda = std::max(cert.lambda, s.linear_norm / nx);
      cert.eta = std::max(cert.eta, s.bilinear_norm / (nx * nx));
    }
    const double res = prob.distance(s.next, x);
    cert.residuals.push_back(res);
    cert.iterations = k + 1;
    if (prev_residual > 0.0 && res > 0.0)
      cert.max_observed_ratio =
          std::max(cert.max_observed_ratio, res / prev_residual);
    if (prev_residual >= 0.0 && res > prev_residual)
      ++rising;
    else
      rising = 0;
    x = std::move(s.next);

    if (res <= opt.tol) {
      cert.converged = true;
      finalize_bounds();
      cert.a_posteriori_residual = prob.distance(prob.step(x).next, x);
      return {std::move(x), std::move(cert)};
    }
    if (rising >= 3 || res > 1e6 * (1.0 + cert.y_norm)) {
      finalize_bounds();
      throw PicardError("picard iteration diverging", std::move(cert));
    }
    prev_residual = res;
  }
  finalize_bounds();
  throw PicardError("picard iteration did not converge within budget",
                    std::move(cert));
}

// ---------------------------------------------------------------------------
// Concrete solvers.

struct SolveOptions {
  double tol = 1e-9;
  int max_iterations = 40;
  NormBand band{0.0, 0.0};  // empty: NormBand::default_for(grid)
  DuhamelPath force_path = DuhamelPath::automatic;
};

struct CauchySolution {
  SpaceTimeField u;
  PicardCertificate certificate;
  NormBand band{0.0, 0.0};
  double xa2 = 0.0;  // sup_t ||u(t)||_{PM^2} over the band
};

// Mild trajectory u(t) = e^{t Delta} P u0 + F(t) + Duhamel(N(u,u)) on the
// given nodes. The datum is dealiased and projected on ingestion.
CauchySolution solve_cauchy(const FourierVectorField& u0, const ForceSpec& f,
                            const GridSpec& grid, const TimeGrid& times,
                            const SolveOptions& opt = {});

struct StationarySolution {
  FourierVectorField w;
  PicardCertificate certificate;
  NormBand band{0.0, 0.0};
  double pm2 = 0.0;
};

// Stationary fixed point w = |xi|^{-2} P g_hat + B_E(w,w).
StationarySolution solve_stationary(const ForceSpec& g, const GridSpec& grid,
                                    const SolveOptions& opt = {});

}  // namespace pmflow
