#pragma once

#include <string>
#include <vector>

#include "dpgls/assembly.hpp"

namespace dpgls {

struct NewtonOptions {
  double tol = 1e-12;  // on the X-dual norm of the gradient
  int maxiter = 20;
};

struct NewtonReport {
  /// X-dual norms of the gradient; entry 0 belongs to the initial iterate.
  std::vector<double> dual_norms;
  int iterations = 0;
  bool converged = false;
  bool damping_used = false;
  DiscreteState state;
  std::string error;  // nonempty if a linear solve failed

  bool failed() const { return !error.empty(); }
};

/// Plain Newton iteration on the least-squares functional. A bisection
/// damping fallback activates only after the dual norm increased twice in a
/// row. Non-convergence at maxiter is reported, not thrown; linear solve
/// failures are reported with the last iterate attached.
NewtonReport newton(const Mesh& mesh, const DofLayout& dofs,
                    const PhiModel& model,
                    const std::vector<ElementWeights>& weights,
                    const DiscreteState& init, const XNormOperator& xnorm,
                    const NewtonOptions& opts = {});

/// Exact minimizer of the least-squares functional for the constant-weight
/// model phi = w (one Newton step from the zero state).
DiscreteState linear_init(const Mesh& mesh, const DofLayout& dofs, double w,
                          const std::vector<ElementWeights>& weights);

struct GevpOptions {
  int dense_threshold = 1024;   // use a dense solve up to this many dofs
  int max_iterations = 360;     // Lanczos subspace cap
  double cert_tol = 1e-8;       // residual certificate
};

struct GevpResult {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double residual_min = 0.0;  // ||H x - lambda K x|| / ||K x||
  double residual_max = 0.0;
  bool certified = false;
};

/// Extreme eigenvalues of the pencil (H, K) with K symmetric positive
/// definite. Dense below the threshold, shift-invert Lanczos in the K inner
/// product above it. Returned pairs are certified against the residual
/// tolerance; failure to certify is reported through the flags/residuals.
GevpResult gevp_extremes(const SparseMat& hessian, const XNormOperator& xnorm,
                         const GevpOptions& opts = {});

/// Smallest generalized singular value of b'(state; ., .) between the trial
/// space (X norm) and the broken P1 test space (H^1(T) norm). Dense
/// computation, restricted to ndof <= 10^4.
double infsup_constant(const Mesh& mesh, const DofLayout& dofs,
                       const PhiModel& model, const DiscreteState& state);

}  // namespace dpgls
