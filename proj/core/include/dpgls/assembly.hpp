#pragma once

#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "dpgls/mesh.hpp"
#include "dpgls/nonlinearity.hpp"
#include "dpgls/spaces.hpp"

namespace dpgls {

using SparseMat = Eigen::SparseMatrix<double>;

/// Value, gradient and Hessian of the weighted least-squares functional
///   LS(f; u, p) = || (I+S0)^{-1/2} (Pi0 p - sigma(grad u) + H0 f) ||^2
///               + || Pi0 f + div p ||^2
/// over the S^1_0 x RT_0 coefficients, together with the per-triangle
/// squared-residual contributions.
struct LsEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  SparseMat hessian;
  Eigen::VectorXd per_element;
};

/// Per-triangle squared residual |T| (R1^2 + R2 . (I+S0)^{-1} R2); the sum is
/// the value of the least-squares functional. All terms are piecewise
/// constant, so this is exact.
Eigen::VectorXd ls_per_element(const Mesh& mesh, const DofLayout& dofs,
                               const PhiModel& model,
                               const std::vector<ElementWeights>& weights,
                               const DiscreteState& state);

double ls_value(const Mesh& mesh, const DofLayout& dofs, const PhiModel& model,
                const std::vector<ElementWeights>& weights,
                const DiscreteState& state);

Eigen::VectorXd ls_gradient(const Mesh& mesh, const DofLayout& dofs,
                            const PhiModel& model,
                            const std::vector<ElementWeights>& weights,
                            const DiscreteState& state);

/// Newton Hessian: Gauss-Newton part plus the curvature term that contracts
/// hess_sigma(grad u) against the weighted first residual.
SparseMat ls_hessian(const Mesh& mesh, const DofLayout& dofs,
                     const PhiModel& model,
                     const std::vector<ElementWeights>& weights,
                     const DiscreteState& state);

/// One-pass evaluation of value, per-element contributions, gradient and
/// Hessian.
LsEvaluation ls_eval(const Mesh& mesh, const DofLayout& dofs,
                     const PhiModel& model,
                     const std::vector<ElementWeights>& weights,
                     const DiscreteState& state);

/// Riesz representer of the residual F - b(state; .) in the broken space
/// P1(T) with the H^1(T) inner product, obtained from independent local 3x3
/// solves. Returns the nodal values (three per triangle) and stores the
/// squared dual norm in *dual_norm_sq if given.
Eigen::VectorXd riesz_representer(const Mesh& mesh, const DofLayout& dofs,
                                  const PhiModel& model,
                                  const std::vector<ElementWeights>& weights,
                                  const DiscreteState& state,
                                  double* dual_norm_sq = nullptr);

/// || F - b(state; .) ||_{Y_h^*}; coincides with sqrt(ls_value) exactly.
double residual_dual_norm(const Mesh& mesh, const DofLayout& dofs,
                          const PhiModel& model,
                          const std::vector<ElementWeights>& weights,
                          const DiscreteState& state);

/// X-norm operator: the energy stiffness on S^1_0 plus the full H(div)
/// product on RT_0, block diagonal and symmetric positive definite.
class XNormOperator {
 public:
  explicit XNormOperator(const Mesh& mesh);

  const SparseMat& matrix() const { return k_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// sqrt(g^T K^{-1} g), the dual norm of a functional given by its
  /// coefficient vector.
  double dual_norm(const Eigen::VectorXd& g) const;
  double norm(const Eigen::VectorXd& x) const;

 private:
  SparseMat k_;
  Eigen::SimplicialLLT<SparseMat> llt_;
};

/// Dual norms of the two residuals of the mixed system: the first equation
/// tested with all broken P1 functions (H^1(T) dual norm), the second with
/// all trial functions (X dual norm). Requires state.v.
std::pair<double, double> mixed_residual(
    const Mesh& mesh, const DofLayout& dofs, const PhiModel& model,
    const std::vector<ElementWeights>& weights, const DiscreteState& state,
    const XNormOperator& xnorm);

/// Gradient of the S10 part of the state on triangle t.
Vec2 grad_u_on_triangle(const Mesh& mesh, const DofLayout& dofs,
                        const Eigen::VectorXd& u, int t);

/// Gradient of a broken P1 function (nodal values, three per triangle).
Vec2 broken_grad_on_triangle(const Mesh& mesh, const Eigen::VectorXd& vloc,
                             int t);

}  // namespace dpgls
