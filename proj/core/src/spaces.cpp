#include "dpgls/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "dpgls/quadrature.hpp"

namespace dpgls {

DofLayout::DofLayout(const Mesh& mesh) {
  vertex_dof.assign(mesh.num_vertices(), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (!mesh.vertex_on_boundary(v)) {
      vertex_dof[v] = n_s10++;
    }
  }
  n_rt = mesh.num_edges();
  edge_cr_dof.assign(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge_on_boundary(e)) {
      edge_cr_dof[e] = n_cr++;
    }
  }
  n_p1_broken = 3 * mesh.num_triangles();
  ndof = n_s10 + n_rt;
}

Mat2 s0_matrix(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  const Vec2& mid = mesh.geom().mid[t];
  Mat2 s0 = Mat2::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec2 d = mesh.vertex(tri[i]) - mid;
    s0 += d * d.transpose();
  }
  return s0 / 12.0;
}

std::vector<ElementWeights> compute_weights(const Mesh& mesh,
                                            const ScalarField& f) {
  const auto& rule = tri_rule_degree4();
  std::vector<ElementWeights> w(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 p0 = mesh.vertex(tri[0]), p1 = mesh.vertex(tri[1]),
               p2 = mesh.vertex(tri[2]);
    const Vec2& mid = mesh.geom().mid[t];
    ElementWeights& ew = w[t];
    ew.S0 = s0_matrix(mesh, t);
    for (const auto& n : rule) {
      const Vec2 x = n.l0 * p0 + n.l1 * p1 + n.l2 * p2;
      const double fx = f(x);
      ew.Pi0f += n.weight * fx;
      ew.H0f += n.weight * fx * (x - mid);
      ew.normf2 += n.weight * fx * fx;
    }
    ew.normf2 *= mesh.geom().area[t];
  }
  return w;
}

DiscreteState zero_state(const DofLayout& dofs) {
  DiscreteState s;
  s.u = Eigen::VectorXd::Zero(dofs.n_s10);
  s.p = Eigen::VectorXd::Zero(dofs.n_rt);
  return s;
}

RtLocal rt_on_triangle(const Mesh& mesh, int t, const Eigen::VectorXd& p) {
  const auto& tri = mesh.triangle(t);
  const auto& te = mesh.triangle_edges(t);
  const auto& g = mesh.geom();
  RtLocal q;
  for (int k = 0; k < 3; ++k) {
    const int e = te[k];
    const double c = mesh.normal_sign(t, e) * g.edge_length[e] * p[e] /
                     (2.0 * g.area[t]);
    q.slope += c;
    q.pi0 += c * (g.mid[t] - mesh.vertex(tri[k]));
  }
  return q;
}

std::vector<Vec2> pi0_rt(const Mesh& mesh, const Eigen::VectorXd& p) {
  std::vector<Vec2> out(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    out[t] = rt_on_triangle(mesh, t, p).pi0;
  }
  return out;
}

double rt_highorder_norm(const Mesh& mesh, const Eigen::VectorXd& p) {
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const RtLocal q = rt_on_triangle(mesh, t, p);
    s += q.slope * q.slope * mesh.geom().area[t] * s0_matrix(mesh, t).trace();
  }
  return std::sqrt(s);
}

Eigen::VectorXd inc_interpolate(
    const Mesh& mesh, const std::function<double(int, const Vec2&)>& v) {
  Eigen::VectorXd out(3 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    // Edge averages at the side midpoints, edge k opposite vertex k.
    double m[3];
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = mesh.vertex(tri[(k + 1) % 3]);
      const Vec2 b = mesh.vertex(tri[(k + 2) % 3]);
      m[k] = integrate_segment(a, b, [&](const Vec2& x) { return v(t, x); }) /
             (b - a).norm();
    }
    // P1 nodal values from midpoint values: value at vertex k.
    for (int k = 0; k < 3; ++k) {
      out[3 * t + k] = m[(k + 1) % 3] + m[(k + 2) % 3] - m[k];
    }
  }
  return out;
}

namespace {

Eigen::Vector3d barycentric(const Mesh& mesh, int t, const Vec2& x) {
  const auto& tri = mesh.triangle(t);
  const Vec2 p0 = mesh.vertex(tri[0]);
  const Vec2 d1 = mesh.vertex(tri[1]) - p0, d2 = mesh.vertex(tri[2]) - p0;
  const double det = d1.x() * d2.y() - d1.y() * d2.x();
  const Vec2 r = x - p0;
  const double l1 = (r.x() * d2.y() - r.y() * d2.x()) / det;
  const double l2 = (d1.x() * r.y() - d1.y() * r.x()) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

DiscreteState prolongate(const Mesh& coarse, const Mesh& fine,
                         const DiscreteState& state) {
  if (!fine.has_parents()) {
    throw std::invalid_argument("fine mesh carries no parent map");
  }
  const DofLayout coarse_dofs(coarse);
  const DofLayout fine_dofs(fine);
  if (state.u.size() != coarse_dofs.n_s10 ||
      state.p.size() != coarse_dofs.n_rt) {
    throw std::invalid_argument("state does not match the coarse mesh");
  }

  auto coarse_nodal = [&](int vertex) {
    const int d = coarse_dofs.vertex_dof[vertex];
    return d >= 0 ? state.u[d] : 0.0;
  };

  DiscreteState out = zero_state(fine_dofs);
  constexpr double tol = 1e-9;

  std::vector<std::uint8_t> vertex_done(fine.num_vertices(), 0);
  for (int t = 0; t < fine.num_triangles(); ++t) {
    const int ct = fine.parent(t);
    if (ct < 0 || ct >= coarse.num_triangles()) {
      throw std::invalid_argument("fine mesh is not a refinement of coarse");
    }
    const auto& ctri = coarse.triangle(ct);
    for (int i = 0; i < 3; ++i) {
      const int fv = fine.triangle(t)[i];
      if (vertex_done[fv]) continue;
      vertex_done[fv] = 1;
      const Eigen::Vector3d l = barycentric(coarse, ct, fine.vertex(fv));
      if (l.minCoeff() < -tol || l.maxCoeff() > 1.0 + tol) {
        throw std::invalid_argument("fine mesh is not a refinement of coarse");
      }
      const int d = fine_dofs.vertex_dof[fv];
      if (d >= 0) {
        out.u[d] = l[0] * coarse_nodal(ctri[0]) + l[1] * coarse_nodal(ctri[1]) +
                   l[2] * coarse_nodal(ctri[2]);
      }
    }
  }

  // Fine edge flux = mean normal flux of the coarse field, evaluated at the
  // edge midpoint (exact for an affine field).
  for (int e = 0; e < fine.num_edges(); ++e) {
    const int ft = fine.edge_triangles(e)[0];
    const int ct = fine.parent(ft);
    const RtLocal q = rt_on_triangle(coarse, ct, state.p);
    const Vec2 x = fine.geom().edge_mid[e];
    out.p[e] = q.eval(x, coarse.geom().mid[ct]).dot(fine.geom().edge_normal[e]);
  }
  return out;
}

Eigen::Matrix3d p1_h1_gram(const Mesh& mesh, int t) {
  const double area = mesh.geom().area[t];
  const auto& grad = mesh.geom().grad_p1[t];
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, j) = area / 12.0 * (i == j ? 2.0 : 1.0) +
                area * grad[i].dot(grad[j]);
    }
  }
  return m;
}

}  // namespace dpgls
