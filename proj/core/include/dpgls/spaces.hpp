#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "dpgls/mesh.hpp"

namespace dpgls {

using Mat2 = Eigen::Matrix2d;
using ScalarField = std::function<double(const Vec2&)>;

/// Degree-of-freedom bookkeeping for S^1_0 (interior vertices), RT_0 (one
/// normal flux per edge, measured against nu_E), CR^1_0 (interior edge
/// midpoints) and broken P1 (three nodal values per triangle).
struct DofLayout {
  explicit DofLayout(const Mesh& mesh);

  int n_s10 = 0;
  int n_rt = 0;
  int n_cr = 0;
  int n_p1_broken = 0;
  int ndof = 0;  // n_s10 + n_rt

  std::vector<int> vertex_dof;  // S10 dof of a vertex, -1 on the boundary
  std::vector<int> edge_cr_dof;  // CR dof of an edge, -1 on the boundary

  int p_dof(int edge) const { return n_s10 + edge; }
};

/// Per-triangle data of the weighted least-squares functional: the second
/// moment S0 of (x - mid), the moments of the right-hand side and its local
/// L2 norm. S0 is exact; f-terms use a fixed degree-4 rule.
struct ElementWeights {
  Mat2 S0 = Mat2::Zero();
  Vec2 H0f = Vec2::Zero();
  double Pi0f = 0.0;
  double normf2 = 0.0;  // ||f||^2_{L2(T)}
};

/// Exact second moment S0|_T = Pi0((x-mid) otimes (x-mid)).
Mat2 s0_matrix(const Mesh& mesh, int t);

std::vector<ElementWeights> compute_weights(const Mesh& mesh,
                                            const ScalarField& f);

/// Coefficient vectors of a discrete trial pair (u, p) and, optionally, the
/// broken-P1 residual representer (three nodal values per triangle).
struct DiscreteState {
  Eigen::VectorXd u;  // S10 coefficients
  Eigen::VectorXd p;  // RT0 edge fluxes against nu_E
  Eigen::VectorXd v;  // broken P1 nodal values; empty if not computed

  bool has_representer() const { return v.size() > 0; }
};

DiscreteState zero_state(const DofLayout& dofs);

/// Local Raviart-Thomas field q|_T = pi0 + slope * (x - mid(T)).
struct RtLocal {
  Vec2 pi0 = Vec2::Zero();
  double slope = 0.0;

  double divergence() const { return 2.0 * slope; }
  Vec2 eval(const Vec2& x, const Vec2& mid) const {
    return pi0 + slope * (x - mid);
  }
};

RtLocal rt_on_triangle(const Mesh& mesh, int t, const Eigen::VectorXd& p);

/// Piecewise constant part of the RT field, one vector per triangle.
std::vector<Vec2> pi0_rt(const Mesh& mesh, const Eigen::VectorXd& p);

/// || (1 - Pi0) q ||_{L2(Omega)}, exact: slope^2 |T| tr S0 per triangle.
double rt_highorder_norm(const Mesh& mesh, const Eigen::VectorXd& p);

/// Nonconforming interpolation: the P1 function on each triangle matching
/// the edge averages of v at the side midpoints. Returns broken P1 nodal
/// values (three per triangle). The argument is evaluated element-wise.
Eigen::VectorXd inc_interpolate(
    const Mesh& mesh, const std::function<double(int, const Vec2&)>& v);

/// Transfers a state from a mesh to one of its refinements: u by nodal
/// interpolation, p by mean normal fluxes of the coarse field across the
/// fine edges. Throws if fine was not refined from coarse.
DiscreteState prolongate(const Mesh& coarse, const Mesh& fine,
                         const DiscreteState& state);

/// Gram matrix of the local P1 basis in the full H^1(T) product.
Eigen::Matrix3d p1_h1_gram(const Mesh& mesh, int t);

}  // namespace dpgls
