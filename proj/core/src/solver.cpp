#include "dpgls/solver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace dpgls {

namespace {

// Direct solve with one round of iterative refinement; falls back to sparse
// LU when the LDLT factorization does not apply (indefinite pivots can occur
// away from a minimizer). Returns false if no factorization succeeded.
bool solve_symmetric(const SparseMat& a, const Eigen::VectorXd& b,
                     Eigen::VectorXd& x) {
  const double bnorm = b.norm();
  auto refine = [&](auto& fact) {
    x = fact.solve(b);
    if (!x.allFinite()) return false;
    for (int round = 0; round < 2; ++round) {
      const Eigen::VectorXd r = b - a * x;
      if (r.norm() <= 1e-13 * (bnorm > 0.0 ? bnorm : 1.0)) break;
      x += fact.solve(r);
    }
    const double res = (b - a * x).norm();
    return x.allFinite() && res <= 1e-12 * (bnorm > 0.0 ? bnorm : 1.0);
  };

  Eigen::SimplicialLDLT<SparseMat> ldlt(a);
  if (ldlt.info() == Eigen::Success && refine(ldlt)) return true;
  Eigen::SparseLU<SparseMat> lu(a);
  if (lu.info() == Eigen::Success && refine(lu)) return true;
  return false;
}

}  // namespace

NewtonReport newton(const Mesh& mesh, const DofLayout& dofs,
                    const PhiModel& model,
                    const std::vector<ElementWeights>& weights,
                    const DiscreteState& init, const XNormOperator& xnorm,
                    const NewtonOptions& opts) {
  NewtonReport report;
  report.state = init;
  report.state.v.resize(0);

  Eigen::VectorXd grad =
      ls_gradient(mesh, dofs, model, weights, report.state);
  double dual = xnorm.dual_norm(grad);
  report.dual_norms.push_back(dual);

  int consecutive_increases = 0;
  for (int it = 0; it < opts.maxiter; ++it) {
    if (dual <= opts.tol) {
      report.converged = true;
      return report;
    }
    const SparseMat hess =
        ls_hessian(mesh, dofs, model, weights, report.state);
    Eigen::VectorXd step;
    if (!solve_symmetric(hess, Eigen::VectorXd(-grad), step)) {
      report.error = "Newton linear solve failed (Hessian singular)";
      return report;
    }

    auto dual_at = [&](double alpha) {
      DiscreteState trial = report.state;
      trial.u += alpha * step.head(dofs.n_s10);
      trial.p += alpha * step.tail(dofs.n_rt);
      return xnorm.dual_norm(ls_gradient(mesh, dofs, model, weights, trial));
    };

    double alpha = 1.0;
    if (report.damping_used) {
      // Bisection backtracking until the dual norm no longer grows.
      int halvings = 0;
      while (dual_at(alpha) > dual && halvings++ < 40) alpha *= 0.5;
    }
    report.state.u += alpha * step.head(dofs.n_s10);
    report.state.p += alpha * step.tail(dofs.n_rt);
    grad = ls_gradient(mesh, dofs, model, weights, report.state);
    const double next = xnorm.dual_norm(grad);
    report.dual_norms.push_back(next);
    report.iterations = it + 1;

    consecutive_increases = next > dual ? consecutive_increases + 1 : 0;
    if (consecutive_increases >= 2) report.damping_used = true;
    dual = next;
  }
  report.converged = dual <= opts.tol;
  return report;
}

DiscreteState linear_init(const Mesh& mesh, const DofLayout& dofs, double w,
                          const std::vector<ElementWeights>& weights) {
  if (!(w > 0.0)) {
    throw std::invalid_argument("linear_init weight must be positive");
  }
  const PhiModel model = PhiModel::linear(w);
  DiscreteState state = zero_state(dofs);
  const Eigen::VectorXd grad = ls_gradient(mesh, dofs, model, weights, state);
  const SparseMat hess = ls_hessian(mesh, dofs, model, weights, state);
  Eigen::VectorXd step;
  if (!solve_symmetric(hess, Eigen::VectorXd(-grad), step)) {
    throw std::runtime_error("linear initialization solve failed");
  }
  state.u = step.head(dofs.n_s10);
  state.p = step.tail(dofs.n_rt);
  return state;
}

namespace {

// Lanczos iteration for an operator that is self-adjoint in the K inner
// product, with full reorthogonalization. Returns the extreme Ritz value
// selected by `largest` and the corresponding Ritz vector.
template <class Op>
std::pair<double, Eigen::VectorXd> lanczos_extreme(
    const Op& op, const XNormOperator& xnorm, int n, int max_iter,
    bool largest) {
  std::mt19937 rng(20240517u);
  std::normal_distribution<double> dist;
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = dist(rng);
  q /= xnorm.norm(q);

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  basis.push_back(q);

  const int m = std::min(max_iter, n);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd z = op(basis[j]);
    const double a = basis[j].dot(xnorm.matrix() * z);
    alpha.push_back(a);
    z -= a * basis[j];
    if (j > 0) z -= beta[j - 1] * basis[j - 1];
    // Full reorthogonalization in the K product, twice for safety.
    for (int round = 0; round < 2; ++round) {
      const Eigen::VectorXd kz = xnorm.matrix() * z;
      Eigen::VectorXd coeff(basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) coeff[i] = basis[i].dot(kz);
      for (std::size_t i = 0; i < basis.size(); ++i) z -= coeff[i] * basis[i];
    }
    const double b = xnorm.norm(z);
    if (b < 1e-14 || j == m - 1) {
      beta.push_back(b);
      break;
    }
    beta.push_back(b);
    basis.push_back(z / b);
  }

  const int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    tri(i, i) = alpha[i];
    if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
  const int pick = largest ? k - 1 : 0;
  const double ritz = es.eigenvalues()[pick];
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
    x += es.eigenvectors()(i, pick) * basis[i];
  }
  return {ritz, x};
}

double pencil_residual(const SparseMat& h, const SparseMat& k, double lambda,
                       const Eigen::VectorXd& x) {
  const Eigen::VectorXd kx = k * x;
  return (h * x - lambda * kx).norm() / kx.norm();
}

}  // namespace

GevpResult gevp_extremes(const SparseMat& hessian, const XNormOperator& xnorm,
                         const GevpOptions& opts) {
  const int n = static_cast<int>(hessian.rows());
  if (hessian.cols() != n || xnorm.matrix().rows() != n) {
    throw std::invalid_argument("gevp operands have mismatched sizes");
  }
  GevpResult out;

  if (n <= opts.dense_threshold) {
    const Eigen::MatrixXd hd(hessian);
    const Eigen::MatrixXd kd(xnorm.matrix());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(hd, kd);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("dense generalized eigensolver failed");
    }
    out.lambda_min = es.eigenvalues()(0);
    out.lambda_max = es.eigenvalues()(n - 1);
    out.residual_min = pencil_residual(hessian, xnorm.matrix(),
                                       out.lambda_min, es.eigenvectors().col(0));
    out.residual_max =
        pencil_residual(hessian, xnorm.matrix(), out.lambda_max,
                        es.eigenvectors().col(n - 1));
    out.certified = out.residual_min <= opts.cert_tol &&
                    out.residual_max <= opts.cert_tol;
    return out;
  }

  // lambda_max from K^{-1} H, lambda_min from the shift-inverted pencil.
  Eigen::SimplicialLDLT<SparseMat> hfact(hessian);
  const bool have_hfact = hfact.info() == Eigen::Success;

  auto op_max = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(xnorm.solve(hessian * x));
  };
  auto op_min = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(hfact.solve(xnorm.matrix() * x));
  };

  for (int m = opts.max_iterations / 2; m <= opts.max_iterations; m += opts.max_iterations / 2) {
    auto [lmax, xmax] = lanczos_extreme(op_max, xnorm, n, m, true);
    out.lambda_max = lmax;
    out.residual_max =
        pencil_residual(hessian, xnorm.matrix(), out.lambda_max, xmax);

    if (have_hfact) {
      auto [mu, xmin] = lanczos_extreme(op_min, xnorm, n, m, true);
      out.lambda_min = 1.0 / mu;
      out.residual_min =
          pencil_residual(hessian, xnorm.matrix(), out.lambda_min, xmin);
    } else {
      auto [lmin, xmin] = lanczos_extreme(op_max, xnorm, n, m, false);
      out.lambda_min = lmin;
      out.residual_min =
          pencil_residual(hessian, xnorm.matrix(), out.lambda_min, xmin);
    }
    out.certified = out.residual_min <= opts.cert_tol &&
                    out.residual_max <= opts.cert_tol;
    if (out.certified) break;
  }
  return out;
}

double infsup_constant(const Mesh& mesh, const DofLayout& dofs,
                       const PhiModel& model, const DiscreteState& state) {
  if (dofs.ndof > 10000) {
    throw std::invalid_argument(
        "infsup_constant is a dense diagnostic, restricted to ndof <= 1e4");
  }
  const auto& geo = mesh.geom();
  // G = B^T M^{-1} B accumulated element by element; M is block diagonal.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dofs.ndof, dofs.ndof);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const Mat2 dsig =
        model.dsigma(grad_u_on_triangle(mesh, dofs, state.u, t));
    // Rows: local P1 test functions; columns: the six local trial dofs.
    Eigen::Matrix<double, 3, 6> b = Eigen::Matrix<double, 3, 6>::Zero();
    int gdof[6];
    for (int j = 0; j < 3; ++j) {
      gdof[j] = dofs.vertex_dof[tri[j]];
      for (int i = 0; i < 3; ++i) {
        b(i, j) = geo.area[t] *
                  geo.grad_p1[t][j].dot(dsig * geo.grad_p1[t][i]);
      }
    }
    for (int k = 0; k < 3; ++k) {
      const int e = te[k];
      gdof[3 + k] = dofs.p_dof(e);
      const double slen = mesh.normal_sign(t, e) * geo.edge_length[e];
      for (int i = 0; i < 3; ++i) {
        if (i == k) continue;  // phi_i vanishes on the opposite edge
        b(i, 3 + k) = -slen / 2.0;
      }
    }
    const Eigen::Matrix3d minv = p1_h1_gram(mesh, t).inverse();
    const Eigen::Matrix<double, 6, 6> gl = b.transpose() * minv * b;
    for (int a = 0; a < 6; ++a) {
      if (gdof[a] < 0) continue;
      for (int c = 0; c < 6; ++c) {
        if (gdof[c] < 0) continue;
        g(gdof[a], gdof[c]) += gl(a, c);
      }
    }
  }
  const Eigen::MatrixXd kd(XNormOperator(mesh).matrix());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(g, kd);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("inf-sup eigensolve failed");
  }
  return std::sqrt(std::max(0.0, es.eigenvalues()(0)));
}

}  // namespace dpgls
