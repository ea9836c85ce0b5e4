#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dpgls/assembly.hpp"

namespace dpgls {

/// Analytic solution with first and second derivatives, used for error
/// computation on manufactured problems.
struct ExactSolution {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> grad;
  std::function<Mat2(const Vec2&)> hess;
};

/// Squared local error indicators
///   eta^2(T) = |T| (R1^2 + R2 . (I+S0)^{-1} R2) + h_T^2 ||f||^2_{L2(T)}.
/// Summing and removing the h f terms recovers the least-squares value
/// exactly.
Eigen::VectorXd local_estimator_sq(const Mesh& mesh, const DofLayout& dofs,
                                   const PhiModel& model,
                                   const std::vector<ElementWeights>& weights,
                                   const DiscreteState& state);

double eta_global(const Eigen::VectorXd& eta_sq);

/// Minimal set (greedy, ties by triangle id) with
/// sum_{marked} eta^2 >= theta * sum eta^2. Requires theta in (0,1).
std::vector<int> doerfler_mark(const Eigen::VectorXd& eta_sq, double theta);

/// E(u) = int varphi(|grad u|) - int f u; the first term is exact for P1
/// functions, the load uses the degree-4 rule.
double energy(const Mesh& mesh, const DofLayout& dofs, const PhiModel& model,
              const ScalarField& f, const DiscreteState& state);

/// (energy error |||u - u_C|||, H(div) error of p = sigma(grad u)) by
/// degree-4 quadrature; div p = -f is used for the divergence part.
std::pair<double, double> exact_errors(const Mesh& mesh, const DofLayout& dofs,
                                       const PhiModel& model,
                                       const DiscreteState& state,
                                       const ExactSolution& exact,
                                       const ScalarField& f);

/// Guaranteed upper bound for gamma1 ||| u - u_C |||: solves the CR^1_0
/// Riesz problem in the broken H^1 product for the residual
/// w -> F(w) - int sigma(grad u_C) . grad_NC w (the trace pairing of RT
/// fluxes with CR tests vanishes) and returns
///   sqrt((1 + c_df^2) dual^2 + kappa^2 ||h f||^2) / gamma1.
double guaranteed_bound(const Mesh& mesh, const DofLayout& dofs,
                        const PhiModel& model,
                        const std::vector<ElementWeights>& weights,
                        const DiscreteState& state, double c_df, double kappa);

/// Default constants of the guaranteed bound: the nonconforming
/// interpolation constant (1/48 + 1/j_{1,1}^2)^{1/2} and the discrete
/// Friedrichs constant for convex domains meshed by right isosceles
/// triangles.
inline constexpr double kKappaDefault = 0.29823;
inline constexpr double kCdfConvexDefault = 6.24;

struct UniquenessCheck {
  double vmax = 0.0;       // || grad_NC v ||_{Linf}
  double threshold = 0.0;  // gamma1^2 / (Lip(grad sigma) (1 + C_F^2))
  bool satisfied = false;
};

/// Evaluates the a posteriori uniqueness criterion from the residual
/// representer in state.v and the Friedrichs constant of the domain.
UniquenessCheck uniqueness_check(const Mesh& mesh, const PhiModel& model,
                                 const DiscreteState& state, double c_f);

/// Aitken delta-squared extrapolation from the last three entries.
double aitken_limit(const std::vector<double>& seq);

}  // namespace dpgls
