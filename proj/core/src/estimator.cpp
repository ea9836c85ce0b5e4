#include "dpgls/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "dpgls/quadrature.hpp"

namespace dpgls {

Eigen::VectorXd local_estimator_sq(const Mesh& mesh, const DofLayout& dofs,
                                   const PhiModel& model,
                                   const std::vector<ElementWeights>& weights,
                                   const DiscreteState& state) {
  Eigen::VectorXd eta_sq =
      ls_per_element(mesh, dofs, model, weights, state);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double h = mesh.geom().diameter[t];
    eta_sq[t] += h * h * weights[t].normf2;
  }
  return eta_sq;
}

double eta_global(const Eigen::VectorXd& eta_sq) {
  return std::sqrt(std::max(0.0, eta_sq.sum()));
}

std::vector<int> doerfler_mark(const Eigen::VectorXd& eta_sq, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("doerfler_mark needs theta in (0,1)");
  }
  const int n = static_cast<int>(eta_sq.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (eta_sq[a] != eta_sq[b]) return eta_sq[a] > eta_sq[b];
    return a < b;
  });
  const double target = theta * eta_sq.sum();
  std::vector<int> marked;
  double acc = 0.0;
  for (int t : order) {
    if (acc >= target) break;
    marked.push_back(t);
    acc += eta_sq[t];
  }
  return marked;
}

double energy(const Mesh& mesh, const DofLayout& dofs, const PhiModel& model,
              const ScalarField& f, const DiscreteState& state) {
  const auto& rule = tri_rule_degree4();
  double e = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 g = grad_u_on_triangle(mesh, dofs, state.u, t);
    e += mesh.geom().area[t] * model.varphi(g.norm());
    // Nodal values of u_C for the load term.
    double uval[3];
    for (int i = 0; i < 3; ++i) {
      const int d = dofs.vertex_dof[tri[i]];
      uval[i] = d >= 0 ? state.u[d] : 0.0;
    }
    const Vec2 p0 = mesh.vertex(tri[0]), p1 = mesh.vertex(tri[1]),
               p2 = mesh.vertex(tri[2]);
    double load = 0.0;
    for (const auto& n : rule) {
      const Vec2 x = n.l0 * p0 + n.l1 * p1 + n.l2 * p2;
      load += n.weight * f(x) * (n.l0 * uval[0] + n.l1 * uval[1] + n.l2 * uval[2]);
    }
    e -= mesh.geom().area[t] * load;
  }
  return e;
}

std::pair<double, double> exact_errors(const Mesh& mesh, const DofLayout& dofs,
                                       const PhiModel& model,
                                       const DiscreteState& state,
                                       const ExactSolution& exact,
                                       const ScalarField& f) {
  const auto& rule = tri_rule_degree4();
  double energy_sq = 0.0, hdiv_sq = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 p0 = mesh.vertex(tri[0]), p1 = mesh.vertex(tri[1]),
               p2 = mesh.vertex(tri[2]);
    const Vec2 grad_uc = grad_u_on_triangle(mesh, dofs, state.u, t);
    const RtLocal q = rt_on_triangle(mesh, t, state.p);
    const Vec2& mid = mesh.geom().mid[t];
    double e1 = 0.0, e2 = 0.0;
    for (const auto& n : rule) {
      const Vec2 x = n.l0 * p0 + n.l1 * p1 + n.l2 * p2;
      const Vec2 gu = exact.grad(x);
      e1 += n.weight * (gu - grad_uc).squaredNorm();
      const Vec2 pexact = model.sigma(gu);
      const double div_err = f(x) + q.divergence();  // div p = -f
      e2 += n.weight *
            ((pexact - q.eval(x, mid)).squaredNorm() + div_err * div_err);
    }
    energy_sq += mesh.geom().area[t] * e1;
    hdiv_sq += mesh.geom().area[t] * e2;
  }
  return {std::sqrt(energy_sq), std::sqrt(hdiv_sq)};
}

double guaranteed_bound(const Mesh& mesh, const DofLayout& dofs,
                        const PhiModel& model,
                        const std::vector<ElementWeights>& weights,
                        const DiscreteState& state, double c_df,
                        double kappa) {
  if (!(c_df > 0.0) || !(kappa > 0.0)) {
    throw std::invalid_argument("guaranteed_bound needs positive constants");
  }
  const auto& geo = mesh.geom();
  // CR^1_0 Riesz problem in the broken H^1 product. The CR basis function of
  // edge k on T is 1 - 2 lambda_k; its mass matrix is diagonal (|T|/3).
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_cr);
  double osc_sq = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& te = mesh.triangle_edges(t);
    const double area = geo.area[t];
    const Vec2 sig =
        model.sigma(grad_u_on_triangle(mesh, dofs, state.u, t));
    for (int k = 0; k < 3; ++k) {
      const int ck = dofs.edge_cr_dof[te[k]];
      if (ck < 0) continue;
      const Vec2 grad_k = -2.0 * geo.grad_p1[t][k];
      // F(psi_k) from the f moments: psi_k = 1/3 + grad_k . (x - mid).
      const double load =
          area * (weights[t].Pi0f / 3.0 + grad_k.dot(weights[t].H0f));
      rhs[ck] += load - area * sig.dot(grad_k);
      for (int l = 0; l < 3; ++l) {
        const int cl = dofs.edge_cr_dof[te[l]];
        if (cl < 0) continue;
        const Vec2 grad_l = -2.0 * geo.grad_p1[t][l];
        const double mass = (k == l) ? area / 3.0 : 0.0;
        trip.emplace_back(ck, cl, mass + area * grad_k.dot(grad_l));
      }
    }
    const double h = geo.diameter[t];
    osc_sq += h * h * weights[t].normf2;
  }
  SparseMat gram(dofs.n_cr, dofs.n_cr);
  gram.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLLT<SparseMat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("CR Riesz factorization failed");
  }
  const double dual_sq = rhs.dot(llt.solve(rhs));
  const double g1 = model.gamma1();
  return std::sqrt((1.0 + c_df * c_df) * dual_sq + kappa * kappa * osc_sq) /
         g1;
}

UniquenessCheck uniqueness_check(const Mesh& mesh, const PhiModel& model,
                                 const DiscreteState& state, double c_f) {
  if (!state.has_representer()) {
    throw std::invalid_argument("uniqueness_check needs the representer v");
  }
  UniquenessCheck out;
  // Componentwise max of the piecewise-constant gradient; this is the
  // convention behind the recorded vmax histories.
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Vec2 g = broken_grad_on_triangle(mesh, state.v, t);
    out.vmax = std::max(out.vmax, g.cwiseAbs().maxCoeff());
  }
  const double lip = model.lip_dsigma();
  const double g1 = model.gamma1();
  out.threshold = lip > 0.0
                      ? g1 * g1 / (lip * (1.0 + c_f * c_f))
                      : std::numeric_limits<double>::infinity();
  out.satisfied = out.vmax < out.threshold;
  return out;
}

double aitken_limit(const std::vector<double>& seq) {
  if (seq.size() < 3) {
    throw std::invalid_argument("aitken_limit needs at least three entries");
  }
  const double x0 = seq[seq.size() - 3];
  const double x1 = seq[seq.size() - 2];
  const double x2 = seq[seq.size() - 1];
  const double d1 = x2 - x1;
  const double d2 = d1 - (x1 - x0);
  if (d2 == 0.0) return x2;
  return x2 - d1 * d1 / d2;
}

}  // namespace dpgls
