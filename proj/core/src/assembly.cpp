#include "dpgls/assembly.hpp"

#include <stdexcept>

namespace dpgls {

namespace {

struct ElemResidual {
  double r1 = 0.0;        // Pi0 f + div p
  Vec2 r2 = Vec2::Zero();  // Pi0 p - sigma(grad u) + H0 f
  Mat2 winv = Mat2::Zero();  // (I + S0)^{-1}
  Vec2 grad_u = Vec2::Zero();
};

ElemResidual elem_residual(const Mesh& mesh, const DofLayout& dofs,
                           const PhiModel& model, const ElementWeights& ew,
                           const DiscreteState& state, int t) {
  ElemResidual r;
  r.grad_u = grad_u_on_triangle(mesh, dofs, state.u, t);
  const RtLocal q = rt_on_triangle(mesh, t, state.p);
  r.r1 = ew.Pi0f + q.divergence();
  r.r2 = q.pi0 - model.sigma(r.grad_u) + ew.H0f;
  r.winv = (Mat2::Identity() + ew.S0).inverse();
  return r;
}

void check_dims(const DofLayout& dofs, const DiscreteState& state) {
  if (state.u.size() != dofs.n_s10 || state.p.size() != dofs.n_rt) {
    throw std::invalid_argument("state dimensions do not match the mesh");
  }
}

}  // namespace

Vec2 grad_u_on_triangle(const Mesh& mesh, const DofLayout& dofs,
                        const Eigen::VectorXd& u, int t) {
  const auto& tri = mesh.triangle(t);
  const auto& grad = mesh.geom().grad_p1[t];
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < 3; ++i) {
    const int d = dofs.vertex_dof[tri[i]];
    if (d >= 0) g += u[d] * grad[i];
  }
  return g;
}

Vec2 broken_grad_on_triangle(const Mesh& mesh, const Eigen::VectorXd& vloc,
                             int t) {
  const auto& grad = mesh.geom().grad_p1[t];
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < 3; ++i) g += vloc[3 * t + i] * grad[i];
  return g;
}

Eigen::VectorXd ls_per_element(const Mesh& mesh, const DofLayout& dofs,
                               const PhiModel& model,
                               const std::vector<ElementWeights>& weights,
                               const DiscreteState& state) {
  check_dims(dofs, state);
  Eigen::VectorXd out(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElemResidual r =
        elem_residual(mesh, dofs, model, weights[t], state, t);
    out[t] = mesh.geom().area[t] *
             (r.r1 * r.r1 + r.r2.dot(r.winv * r.r2));
  }
  return out;
}

double ls_value(const Mesh& mesh, const DofLayout& dofs, const PhiModel& model,
                const std::vector<ElementWeights>& weights,
                const DiscreteState& state) {
  return ls_per_element(mesh, dofs, model, weights, state).sum();
}

Eigen::VectorXd ls_gradient(const Mesh& mesh, const DofLayout& dofs,
                            const PhiModel& model,
                            const std::vector<ElementWeights>& weights,
                            const DiscreteState& state) {
  check_dims(dofs, state);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dofs.ndof);
  const auto& geo = mesh.geom();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElemResidual r =
        elem_residual(mesh, dofs, model, weights[t], state, t);
    const double area = geo.area[t];
    const Vec2 wr2 = r.winv * r.r2;
    const Mat2 dsig = model.dsigma(r.grad_u);
    const auto& tri = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    for (int i = 0; i < 3; ++i) {
      const int d = dofs.vertex_dof[tri[i]];
      if (d >= 0) {
        g[d] -= 2.0 * area * geo.grad_p1[t][i].dot(dsig * wr2);
      }
    }
    for (int k = 0; k < 3; ++k) {
      const int e = te[k];
      const double slen = mesh.normal_sign(t, e) * geo.edge_length[e];
      const Vec2 dir = geo.mid[t] - mesh.vertex(tri[k]);
      g[dofs.p_dof(e)] += 2.0 * slen * (r.r1 + 0.5 * wr2.dot(dir));
    }
  }
  return g;
}

namespace {

// Local 6x6 contribution: dofs 0..2 are the vertex directions (may be
// boundary), 3..5 the edge fluxes.
void hessian_triplets(const Mesh& mesh, const DofLayout& dofs,
                      const PhiModel& model, const ElementWeights& ew,
                      const DiscreteState& state, int t,
                      std::vector<Eigen::Triplet<double>>& trip) {
  const ElemResidual r = elem_residual(mesh, dofs, model, ew, state, t);
  const auto& geo = mesh.geom();
  const double area = geo.area[t];
  const auto& tri = mesh.triangle(t);
  const auto& te = mesh.triangle_edges(t);
  const Mat2 dsig = model.dsigma(r.grad_u);
  const Vec2 wr2 = r.winv * r.r2;
  const auto hsig = model.hess_sigma(r.grad_u);

  int gdof[6];
  double dr1[6];
  Vec2 dr2[6];
  for (int i = 0; i < 3; ++i) {
    gdof[i] = dofs.vertex_dof[tri[i]];
    dr1[i] = 0.0;
    dr2[i] = -(dsig * geo.grad_p1[t][i]);
  }
  for (int k = 0; k < 3; ++k) {
    const int e = te[k];
    const double slen = mesh.normal_sign(t, e) * geo.edge_length[e];
    gdof[3 + k] = dofs.p_dof(e);
    dr1[3 + k] = slen / area;
    dr2[3 + k] = slen / (2.0 * area) * (geo.mid[t] - mesh.vertex(tri[k]));
  }

  for (int a = 0; a < 6; ++a) {
    if (gdof[a] < 0) continue;
    for (int b = 0; b < 6; ++b) {
      if (gdof[b] < 0) continue;
      double h = 2.0 * area * (dr1[a] * dr1[b] + dr2[a].dot(r.winv * dr2[b]));
      if (a < 3 && b < 3) {
        // Curvature of sigma against the weighted residual.
        const Vec2& gi = geo.grad_p1[t][a];
        const Vec2& gj = geo.grad_p1[t][b];
        double c = 0.0;
        for (int j = 0; j < 2; ++j) c += wr2[j] * gi.dot(hsig[j] * gj);
        h -= 2.0 * area * c;
      }
      trip.emplace_back(gdof[a], gdof[b], h);
    }
  }
}

}  // namespace

SparseMat ls_hessian(const Mesh& mesh, const DofLayout& dofs,
                     const PhiModel& model,
                     const std::vector<ElementWeights>& weights,
                     const DiscreteState& state) {
  check_dims(dofs, state);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(36 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    hessian_triplets(mesh, dofs, model, weights[t], state, t, trip);
  }
  SparseMat h(dofs.ndof, dofs.ndof);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

LsEvaluation ls_eval(const Mesh& mesh, const DofLayout& dofs,
                     const PhiModel& model,
                     const std::vector<ElementWeights>& weights,
                     const DiscreteState& state) {
  LsEvaluation out;
  out.per_element = ls_per_element(mesh, dofs, model, weights, state);
  out.value = out.per_element.sum();
  out.gradient = ls_gradient(mesh, dofs, model, weights, state);
  out.hessian = ls_hessian(mesh, dofs, model, weights, state);
  return out;
}

namespace {

// Local right-hand side of the Riesz problem, r_i = F(phi_i) - b(state;
// phi_i) for the three P1 basis functions of triangle t. The load uses the
// same moments of f as the weights; the trace term pairs the constant edge
// fluxes with int_E phi_i = |E|/2 for the two edges meeting vertex i.
Eigen::Vector3d local_residual_rhs(const Mesh& mesh, const DofLayout& dofs,
                                   const PhiModel& model,
                                   const ElementWeights& ew,
                                   const DiscreteState& state, int t) {
  const auto& geo = mesh.geom();
  const auto& te = mesh.triangle_edges(t);
  const double area = geo.area[t];
  const Vec2 sig =
      model.sigma(grad_u_on_triangle(mesh, dofs, state.u, t));
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    const double load = area * (ew.Pi0f / 3.0 + geo.grad_p1[t][i].dot(ew.H0f));
    double trace = 0.0;
    for (int k = 0; k < 3; ++k) {
      if (k == i) continue;
      const int e = te[k];
      trace += mesh.normal_sign(t, e) * state.p[e] * geo.edge_length[e] / 2.0;
    }
    const double b = area * sig.dot(geo.grad_p1[t][i]) - trace;
    rhs[i] = load - b;
  }
  return rhs;
}

}  // namespace

Eigen::VectorXd riesz_representer(const Mesh& mesh, const DofLayout& dofs,
                                  const PhiModel& model,
                                  const std::vector<ElementWeights>& weights,
                                  const DiscreteState& state,
                                  double* dual_norm_sq) {
  check_dims(dofs, state);
  Eigen::VectorXd v(3 * mesh.num_triangles());
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Matrix3d m = p1_h1_gram(mesh, t);
    const Eigen::Vector3d rhs =
        local_residual_rhs(mesh, dofs, model, weights[t], state, t);
    const Eigen::Vector3d vloc = m.ldlt().solve(rhs);
    v.segment<3>(3 * t) = vloc;
    total += rhs.dot(vloc);
  }
  if (dual_norm_sq != nullptr) *dual_norm_sq = total;
  return v;
}

double residual_dual_norm(const Mesh& mesh, const DofLayout& dofs,
                          const PhiModel& model,
                          const std::vector<ElementWeights>& weights,
                          const DiscreteState& state) {
  double sq = 0.0;
  riesz_representer(mesh, dofs, model, weights, state, &sq);
  return std::sqrt(std::max(sq, 0.0));
}

XNormOperator::XNormOperator(const Mesh& mesh) {
  const DofLayout dofs(mesh);
  const auto& geo = mesh.geom();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(18 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const double area = geo.area[t];
    const double tr_s0 = s0_matrix(mesh, t).trace();
    for (int i = 0; i < 3; ++i) {
      const int di = dofs.vertex_dof[tri[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dofs.vertex_dof[tri[j]];
        if (dj < 0) continue;
        trip.emplace_back(di, dj,
                          area * geo.grad_p1[t][i].dot(geo.grad_p1[t][j]));
      }
    }
    for (int k = 0; k < 3; ++k) {
      const double sk = mesh.normal_sign(t, te[k]) * geo.edge_length[te[k]];
      const Vec2 dk = geo.mid[t] - mesh.vertex(tri[k]);
      for (int l = 0; l < 3; ++l) {
        const double sl = mesh.normal_sign(t, te[l]) * geo.edge_length[te[l]];
        const Vec2 dl = geo.mid[t] - mesh.vertex(tri[l]);
        const double mass = sk * sl / (4.0 * area) * (tr_s0 + dk.dot(dl));
        const double divdiv = sk * sl / area;
        trip.emplace_back(dofs.p_dof(te[k]), dofs.p_dof(te[l]), mass + divdiv);
      }
    }
  }
  k_.resize(dofs.ndof, dofs.ndof);
  k_.setFromTriplets(trip.begin(), trip.end());
  llt_.compute(k_);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("X-norm operator factorization failed");
  }
}

Eigen::VectorXd XNormOperator::solve(const Eigen::VectorXd& rhs) const {
  return llt_.solve(rhs);
}

double XNormOperator::dual_norm(const Eigen::VectorXd& g) const {
  return std::sqrt(std::max(0.0, g.dot(llt_.solve(g))));
}

double XNormOperator::norm(const Eigen::VectorXd& x) const {
  return std::sqrt(std::max(0.0, x.dot(k_ * x)));
}

std::pair<double, double> mixed_residual(
    const Mesh& mesh, const DofLayout& dofs, const PhiModel& model,
    const std::vector<ElementWeights>& weights, const DiscreteState& state,
    const XNormOperator& xnorm) {
  check_dims(dofs, state);
  if (!state.has_representer()) {
    throw std::invalid_argument("mixed_residual needs the representer v");
  }
  const auto& geo = mesh.geom();
  double first_sq = 0.0;
  Eigen::VectorXd second = Eigen::VectorXd::Zero(dofs.ndof);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Matrix3d m = p1_h1_gram(mesh, t);
    const Eigen::Vector3d vloc = state.v.segment<3>(3 * t);
    // First equation: F(w) - a(v,w) - b(state; w) over the local P1 basis.
    const Eigen::Vector3d res1 =
        local_residual_rhs(mesh, dofs, model, weights[t], state, t) - m * vloc;
    first_sq += res1.dot(m.ldlt().solve(res1));
    // Second equation: b'(state; xi, v) over the trial basis.
    const Vec2 grad_v = broken_grad_on_triangle(mesh, state.v, t);
    const Mat2 dsig =
        model.dsigma(grad_u_on_triangle(mesh, dofs, state.u, t));
    const auto& tri = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    for (int i = 0; i < 3; ++i) {
      const int d = dofs.vertex_dof[tri[i]];
      if (d >= 0) {
        second[d] += geo.area[t] * geo.grad_p1[t][i].dot(dsig * grad_v);
      }
    }
    for (int k = 0; k < 3; ++k) {
      const int e = te[k];
      // <s_E, v>_dT restricted to this triangle: flux sign times the edge
      // integral of the linear trace.
      const double edge_int = geo.edge_length[e] / 2.0 *
                              (vloc[(k + 1) % 3] + vloc[(k + 2) % 3]);
      second[dofs.p_dof(e)] -= mesh.normal_sign(t, e) * edge_int;
    }
  }
  return {std::sqrt(std::max(first_sq, 0.0)), xnorm.dual_norm(second)};
}

}  // namespace dpgls
