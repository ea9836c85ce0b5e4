#include "dpgls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace dpgls {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<int> parents)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      parents_(std::move(parents)) {
  const int nv = num_vertices();
  const int nt = num_triangles();
  if (!parents_.empty() && static_cast<int>(parents_.size()) != nt) {
    throw std::invalid_argument("parent map size does not match triangle count");
  }

  tri_edges_.assign(nt, {-1, -1, -1});
  std::unordered_map<std::uint64_t, int> edge_of;
  edge_of.reserve(3 * nt);

  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      if (tri[i] < 0 || tri[i] >= nv) {
        throw std::invalid_argument("triangle references unknown vertex");
      }
    }
    const Vec2 e1 = vertices_[tri[1]] - vertices_[tri[0]];
    const Vec2 e2 = vertices_[tri[2]] - vertices_[tri[0]];
    if (cross2(e1, e2) <= 0.0) {
      throw std::invalid_argument("triangle is degenerate or clockwise");
    }
    // Directed edges along the CCW loop, edge k opposite local vertex k.
    const std::array<std::array<int, 2>, 3> directed = {{
        {tri[1], tri[2]}, {tri[2], tri[0]}, {tri[0], tri[1]}}};
    for (int k = 0; k < 3; ++k) {
      const auto key = edge_key(directed[k][0], directed[k][1]);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        const int e = static_cast<int>(edges_.size());
        edge_of.emplace(key, e);
        edges_.push_back(directed[k]);
        edge_tris_.push_back({t, -1});
        tri_edges_[t][k] = e;
      } else {
        const int e = it->second;
        if (edge_tris_[e][1] != -1) {
          throw std::invalid_argument("edge shared by more than two triangles");
        }
        edge_tris_[e][1] = t;
        tri_edges_[t][k] = e;
      }
    }
  }

  vertex_boundary_.assign(nv, 0);
  for (int e = 0; e < num_edges(); ++e) {
    if (edge_tris_[e][1] < 0) {
      vertex_boundary_[edges_[e][0]] = 1;
      vertex_boundary_[edges_[e][1]] = 1;
    }
  }

  geom_.area.resize(nt);
  geom_.mid.resize(nt);
  geom_.diameter.resize(nt);
  geom_.grad_p1.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    const Vec2 p0 = vertices_[tri[0]], p1 = vertices_[tri[1]], p2 = vertices_[tri[2]];
    const double area = 0.5 * cross2(p1 - p0, p2 - p0);
    geom_.area[t] = area;
    geom_.mid[t] = (p0 + p1 + p2) / 3.0;
    geom_.diameter[t] =
        std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
    // grad of barycentric coordinate i: rotate the opposite edge by 90 deg.
    const std::array<Vec2, 3> p = {p0, p1, p2};
    for (int i = 0; i < 3; ++i) {
      const Vec2 d = p[(i + 2) % 3] - p[(i + 1) % 3];
      geom_.grad_p1[t][i] = Vec2(-d.y(), d.x()) / (2.0 * area);
    }
    geom_.total_area += area;
    geom_.h_max = std::max(geom_.h_max, geom_.diameter[t]);
  }

  geom_.edge_length.resize(num_edges());
  geom_.edge_mid.resize(num_edges());
  geom_.edge_normal.resize(num_edges());
  for (int e = 0; e < num_edges(); ++e) {
    const Vec2 a = vertices_[edges_[e][0]], b = vertices_[edges_[e][1]];
    const Vec2 d = b - a;
    geom_.edge_length[e] = d.norm();
    geom_.edge_mid[e] = 0.5 * (a + b);
    // The stored direction follows the CCW loop of the first incident
    // triangle, so the right-hand normal points out of it.
    geom_.edge_normal[e] = Vec2(d.y(), -d.x()) / d.norm();
  }
}

Mesh make_square_mesh() {
  std::vector<Vec2> v = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0},
                         {0.0, 0.0}};
  std::vector<std::array<int, 3>> t = {
      {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  return Mesh(std::move(v), std::move(t));
}

Mesh make_lshape_mesh() {
  std::vector<Vec2> v = {{-1.0, -1.0}, {0.0, -1.0}, {1.0, -1.0}, {-1.0, 0.0},
                         {0.0, 0.0},   {1.0, 0.0},  {-1.0, 1.0}, {0.0, 1.0},
                         {-0.5, -0.5}, {0.5, -0.5}, {-0.5, 0.5}};
  std::vector<std::array<int, 3>> t = {
      {0, 1, 8},  {1, 4, 8},  {4, 3, 8},  {3, 0, 8},   // [-1,0] x [-1,0]
      {1, 2, 9},  {2, 5, 9},  {5, 4, 9},  {4, 1, 9},   // [ 0,1] x [-1,0]
      {3, 4, 10}, {4, 7, 10}, {7, 6, 10}, {6, 3, 10},  // [-1,0] x [ 0,1]
  };
  return Mesh(std::move(v), std::move(t));
}

Mesh refine_uniform(const Mesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Vec2> vertices(mesh.num_vertices());
  for (int v = 0; v < nv; ++v) vertices[v] = mesh.vertex(v);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    vertices.push_back(mesh.geom().edge_mid[e]);
  }

  std::vector<std::array<int, 3>> tris;
  std::vector<int> parents;
  tris.reserve(4 * mesh.num_triangles());
  parents.reserve(4 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const int m12 = nv + te[0];  // midpoint of (v1,v2)
    const int m20 = nv + te[1];  // midpoint of (v2,v0)
    const int m01 = nv + te[2];  // midpoint of (v0,v1)
    tris.push_back({tri[0], m01, m20});
    tris.push_back({m01, tri[1], m12});
    tris.push_back({m20, m12, tri[2]});
    tris.push_back({m12, m20, m01});
    for (int c = 0; c < 4; ++c) parents.push_back(t);
  }
  return Mesh(std::move(vertices), std::move(tris), std::move(parents));
}

namespace {

Mesh refine_marked_edges(const Mesh& mesh,
                         std::vector<std::uint8_t> edge_marked) {
  const int nt = mesh.num_triangles();
  const int ne = mesh.num_edges();

  // Conforming closure: a triangle with any marked edge must have its
  // refinement edge marked. Terminates since marks only grow.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < nt; ++t) {
      const auto& te = mesh.triangle_edges(t);
      if ((edge_marked[te[0]] || edge_marked[te[1]]) && !edge_marked[te[2]]) {
        edge_marked[te[2]] = 1;
        changed = true;
      }
    }
  }

  std::vector<Vec2> vertices(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) vertices[v] = mesh.vertex(v);
  std::vector<int> midvertex(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (edge_marked[e]) {
      midvertex[e] = static_cast<int>(vertices.size());
      vertices.push_back(mesh.geom().edge_mid[e]);
    }
  }

  std::vector<std::array<int, 3>> tris;
  std::vector<int> parents;
  tris.reserve(nt + 3 * (vertices.size() - mesh.num_vertices()));
  parents.reserve(tris.capacity());
  auto emit = [&](int a, int b, int c, int parent) {
    tris.push_back({a, b, c});
    parents.push_back(parent);
  };

  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const int v0 = tri[0], v1 = tri[1], v2 = tri[2];
    if (!edge_marked[te[2]]) {
      emit(v0, v1, v2, t);
      continue;
    }
    const int m = midvertex[te[2]];
    // First child (v2,v0,m) has refinement edge (v2,v0) = edge te[1].
    if (edge_marked[te[1]]) {
      const int m2 = midvertex[te[1]];
      emit(m, v2, m2, t);
      emit(v0, m, m2, t);
    } else {
      emit(v2, v0, m, t);
    }
    // Second child (v1,v2,m) has refinement edge (v1,v2) = edge te[0].
    if (edge_marked[te[0]]) {
      const int m3 = midvertex[te[0]];
      emit(m, v1, m3, t);
      emit(v2, m, m3, t);
    } else {
      emit(v1, v2, m, t);
    }
  }
  return Mesh(std::move(vertices), std::move(tris), std::move(parents));
}

}  // namespace

Mesh refine_nvb(const Mesh& mesh, const std::vector<int>& marked) {
  std::vector<std::uint8_t> edge_marked(mesh.num_edges(), 0);
  for (int t : marked) {
    if (t < 0 || t >= mesh.num_triangles()) {
      throw std::invalid_argument("marked triangle id out of range");
    }
    edge_marked[mesh.refinement_edge(t)] = 1;
  }
  return refine_marked_edges(mesh, std::move(edge_marked));
}

Mesh refine_uniform_nvb(const Mesh& mesh) {
  return refine_marked_edges(
      mesh, std::vector<std::uint8_t>(mesh.num_edges(), 1));
}

void check_regular(const Mesh& mesh) {
  const auto& g = mesh.geom();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (!(g.area[t] > 0.0)) {
      throw std::runtime_error("nonpositive triangle area");
    }
  }
  std::map<std::pair<double, double>, int> vertex_at;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    vertex_at[{mesh.vertex(v).x(), mesh.vertex(v).y()}] = v;
  }
  if (static_cast<int>(vertex_at.size()) != mesh.num_vertices()) {
    throw std::runtime_error("duplicate vertex coordinates");
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& et = mesh.edge_triangles(e);
    if (et[0] < 0) {
      throw std::runtime_error("edge without incident triangle");
    }
    // Hanging nodes from bisection sit at midpoints of undivided edges.
    const Vec2 m = g.edge_mid[e];
    auto it = vertex_at.find({m.x(), m.y()});
    if (it != vertex_at.end()) {
      throw std::runtime_error("hanging node at edge midpoint");
    }
    const Vec2& nu = g.edge_normal[e];
    if (nu.dot(m - g.mid[et[0]]) <= 0.0) {
      throw std::runtime_error("nu_E is not the outer normal of T+");
    }
    if (et[1] >= 0 && nu.dot(m - g.mid[et[1]]) >= 0.0) {
      throw std::runtime_error("nu_E does not point into T-");
    }
    if (et[1] >= 0 && et[0] >= et[1]) {
      throw std::runtime_error("interior edge not oriented by lower triangle");
    }
  }
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  char buf[128];
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' '
      << mesh.num_edges() << '\n';
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %d", mesh.vertex(v).x(),
                  mesh.vertex(v).y(), mesh.vertex_on_boundary(v) ? 1 : 0);
    out << buf << '\n';
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    // The refinement edge is always the local edge opposite vertex 2.
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << " 2\n";
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& ed = mesh.edge(e);
    out << ed[0] << ' ' << ed[1] << ' ' << (mesh.edge_on_boundary(e) ? 1 : 0)
        << '\n';
  }
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open mesh file for writing: " + path);
  }
  write_mesh(mesh, out);
  if (!out.good()) {
    throw std::runtime_error("write failed for mesh file: " + path);
  }
}

Mesh read_mesh(std::istream& in) {
  int nv = 0, nt = 0, ne = 0;
  if (!(in >> nv >> nt >> ne) || nv <= 0 || nt <= 0 || ne < 0) {
    throw std::runtime_error("bad mesh header");
  }
  std::vector<Vec2> vertices(nv);
  std::vector<int> bflag(nv);
  for (int v = 0; v < nv; ++v) {
    if (!(in >> vertices[v].x() >> vertices[v].y() >> bflag[v])) {
      throw std::runtime_error("bad vertex line in mesh file");
    }
  }
  std::vector<std::array<int, 3>> tris(nt);
  for (int t = 0; t < nt; ++t) {
    int refedge = 0;
    if (!(in >> tris[t][0] >> tris[t][1] >> tris[t][2] >> refedge)) {
      throw std::runtime_error("bad triangle line in mesh file");
    }
    // Rotate so the refinement edge sits between the first two vertices;
    // a left rotation moves the opposite vertex from slot r to slot r-1.
    for (int r = refedge; r != 2; r = (r + 2) % 3) {
      std::rotate(tris[t].begin(), tris[t].begin() + 1, tris[t].end());
    }
  }
  for (int e = 0; e < ne; ++e) {
    int a, b, f;
    if (!(in >> a >> b >> f)) {
      throw std::runtime_error("bad edge line in mesh file");
    }
  }
  Mesh mesh(std::move(vertices), std::move(tris));
  if (mesh.num_edges() != ne) {
    throw std::runtime_error("mesh file edge count does not match topology");
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if ((bflag[v] != 0) != mesh.vertex_on_boundary(v)) {
      throw std::runtime_error("mesh file boundary flags are inconsistent");
    }
  }
  return mesh;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open mesh file: " + path);
  }
  return read_mesh(in);
}

}  // namespace dpgls
