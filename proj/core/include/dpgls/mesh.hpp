#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dpgls {

using Vec2 = Eigen::Vector2d;

/// Geometric quantities derived once at mesh construction.
struct GeometryCache {
  std::vector<double> area;                   // |T|
  std::vector<Vec2> mid;                      // barycenter of T
  std::vector<double> diameter;               // h_T (longest side)
  std::vector<std::array<Vec2, 3>> grad_p1;   // gradients of barycentric coords
  std::vector<double> edge_length;            // |E|
  std::vector<Vec2> edge_mid;                 // mid(E)
  std::vector<Vec2> edge_normal;              // nu_E, outward for edge_triangles[e][0]
  double total_area = 0.0;
  double h_max = 0.0;
};

/// Conforming triangulation of a polygonal domain.
///
/// Triangles are stored counterclockwise with the refinement edge between the
/// first two vertices. Edge e carries a globally fixed unit normal nu_E that
/// equals the outer normal of its first incident triangle; for interior edges
/// that triangle is the one with the lower global index. Meshes are immutable
/// after construction; refinement produces a new mesh with a child-to-parent
/// triangle map.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<int> parents = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  /// Endpoints of edge e, directed along the boundary loop of its first
  /// incident triangle.
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  /// Incident triangles {T+, T-}; T- is -1 for boundary edges.
  const std::array<int, 2>& edge_triangles(int e) const {
    return edge_tris_[e];
  }
  /// Edge opposite local vertex i of triangle t.
  const std::array<int, 3>& triangle_edges(int t) const {
    return tri_edges_[t];
  }
  int refinement_edge(int t) const { return tri_edges_[t][2]; }

  bool vertex_on_boundary(int v) const { return vertex_boundary_[v] != 0; }
  bool edge_on_boundary(int e) const { return edge_tris_[e][1] < 0; }

  /// Sign of nu_T . nu_E on edge e of triangle t (+1 iff t is the first
  /// incident triangle).
  double normal_sign(int t, int e) const {
    return edge_tris_[e][0] == t ? 1.0 : -1.0;
  }

  /// Parent triangle in the mesh this one was refined from; -1 for an
  /// initial mesh.
  int parent(int t) const { return parents_.empty() ? -1 : parents_[t]; }
  bool has_parents() const { return !parents_.empty(); }

  const GeometryCache& geom() const { return geom_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::uint8_t> vertex_boundary_;
  std::vector<int> parents_;
  GeometryCache geom_;
};

/// Criss-cross triangulation of (-1,1)^2 into four triangles. One uniform
/// refinement yields 16 triangles and ndof = dim S^1_0 + dim RT_0 = 33.
Mesh make_square_mesh();

/// Criss-cross triangulation of the L-shape (-1,1)^2 \ [0,1]^2 into twelve
/// triangles (ndof = 25); the re-entrant corner at the origin is a vertex.
Mesh make_lshape_mesh();

/// Red refinement: every triangle is split into four similar children whose
/// refinement edges are parallel to (or contained in) the parent's.
Mesh refine_uniform(const Mesh& mesh);

/// Newest-vertex bisection of the marked triangles together with the
/// smallest conforming closure.
Mesh refine_nvb(const Mesh& mesh, const std::vector<int>& marked);

/// Bisects every edge (bisec3 on every triangle). On right isosceles
/// criss-cross meshes this is the self-similar uniform refinement that the
/// benchmark histories are computed on.
Mesh refine_uniform_nvb(const Mesh& mesh);

/// Throws std::runtime_error if the mesh violates regularity: nonpositive
/// areas, bad edge-triangle incidence, hanging nodes at edge midpoints, or a
/// normal nu_E that is not the outer normal of the first incident triangle.
void check_regular(const Mesh& mesh);

// Plain-text exchange format:
//   line 1: "NV NT NE"
//   NV lines "x y bflag", NT lines "v0 v1 v2 refedge", NE lines "v0 v1 bflag"
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

}  // namespace dpgls
