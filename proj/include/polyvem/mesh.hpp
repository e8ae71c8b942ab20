// Polygonal mesh data model: vertices, counterclockwise cells, derived edge
// connectivity and geometric quantities. Meshes are immutable after
// construction; validation happens once in the constructor.

#ifndef POLYVEM_MESH_HPP
#define POLYVEM_MESH_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyvem/polynomial.hpp"

namespace polyvem {

/// An oriented straight edge: local parameter s runs over [-length/2, length/2]
/// from a to b, the normal is the tangent rotated clockwise (outward when the
/// traversal is counterclockwise around a cell).
struct EdgeFrame {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  double length = 0.0;
  Vec2 midpoint = Vec2::Zero();
  Vec2 tangent = Vec2::Zero();
  Vec2 normal = Vec2::Zero();

  static EdgeFrame between(const Vec2& a, const Vec2& b) {
    EdgeFrame f;
    f.a = a;
    f.b = b;
    f.length = (b - a).norm();
    f.midpoint = 0.5 * (a + b);
    f.tangent = (b - a) / f.length;
    f.normal = Vec2(f.tangent.y(), -f.tangent.x());
    return f;
  }

  Vec2 point_at(double s) const { return midpoint + s * tangent; }
};

struct CellGeometry {
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  double diameter = 0.0;
  Vec2 star_point = Vec2::Zero();       // fan apex for quadrature
  std::vector<EdgeFrame> edges;         // one frame per local edge, traversal order
};

struct MeshEdge {
  int v0 = -1;  // v0 < v1 fixes the global orientation
  int v1 = -1;
  int cell_left = -1;   // traverses v0 -> v1
  int cell_right = -1;  // traverses v1 -> v0 (absent on the boundary)

  bool boundary() const { return cell_right < 0 || cell_left < 0; }
};

class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells,
       std::map<int, Vec2> star_points = {})
      : vertices_(std::move(vertices)), cells_(std::move(cells)), star_points_(std::move(star_points)) {
    validate_and_build();
  }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const Vec2& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<int>& cell(int c) const { return cells_[static_cast<std::size_t>(c)]; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const MeshEdge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<MeshEdge>& edges() const { return edges_; }

  /// Global edge index of local edge k (from cell vertex k to k+1) of cell c.
  int cell_edge(int c, int k) const { return cell_edges_[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)]; }

  /// +1 if cell c traverses the edge in its global (v0->v1) direction.
  int cell_edge_direction(int c, int k) const {
    const auto& poly = cell(c);
    const int a = poly[static_cast<std::size_t>(k)];
    return a == edge(cell_edge(c, k)).v0 ? 1 : -1;
  }

  const CellGeometry& geometry(int c) const { return geometry_[static_cast<std::size_t>(c)]; }

  /// Characteristic vertex length: average diameter of the incident cells.
  double vertex_length(int v) const { return vertex_h_[static_cast<std::size_t>(v)]; }

  double mesh_size() const { return mesh_size_; }

  bool boundary_vertex(int v) const { return boundary_vertex_[static_cast<std::size_t>(v)]; }

 private:
  void validate_and_build() {
    if (vertices_.empty() || cells_.empty()) throw ConfigError("mesh: no vertices or no cells");
    geometry_.resize(cells_.size());
    std::map<std::pair<int, int>, int> edge_ids;
    cell_edges_.resize(cells_.size());

    for (int c = 0; c < n_cells(); ++c) {
      const auto& poly = cells_[static_cast<std::size_t>(c)];
      const int k = static_cast<int>(poly.size());
      if (k < 3) throw ConfigError("mesh: cell " + std::to_string(c) + " has fewer than 3 vertices");
      for (int i = 0; i < k; ++i) {
        const int v = poly[static_cast<std::size_t>(i)];
        if (v < 0 || v >= n_vertices())
          throw ConfigError("mesh: cell " + std::to_string(c) + " references unknown vertex");
        for (int j = i + 1; j < k; ++j)
          if (poly[static_cast<std::size_t>(j)] == v)
            throw ConfigError("mesh: cell " + std::to_string(c) + " lists vertex " +
                              std::to_string(v) + " twice");
      }

      CellGeometry& g = geometry_[static_cast<std::size_t>(c)];
      double twice_area = 0.0;
      Vec2 weighted = Vec2::Zero();
      for (int i = 0; i < k; ++i) {
        const Vec2& p = vertex(poly[static_cast<std::size_t>(i)]);
        const Vec2& q = vertex(poly[static_cast<std::size_t>((i + 1) % k)]);
        const double cross = p.x() * q.y() - q.x() * p.y();
        twice_area += cross;
        weighted += cross * (p + q);
      }
      if (twice_area <= 0.0)
        throw ConfigError("mesh: cell " + std::to_string(c) +
                          " is clockwise or degenerate (signed area <= 0)");
      g.area = 0.5 * twice_area;
      g.centroid = weighted / (3.0 * twice_area);
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          g.diameter = std::max(g.diameter, (vertex(poly[static_cast<std::size_t>(i)]) -
                                             vertex(poly[static_cast<std::size_t>(j)]))
                                                .norm());
      auto star = star_points_.find(c);
      g.star_point = star == star_points_.end() ? g.centroid : star->second;

      check_simple(c, poly);

      g.edges.reserve(static_cast<std::size_t>(k));
      cell_edges_[static_cast<std::size_t>(c)].resize(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        const int a = poly[static_cast<std::size_t>(i)];
        const int b = poly[static_cast<std::size_t>((i + 1) % k)];
        g.edges.push_back(EdgeFrame::between(vertex(a), vertex(b)));
        auto key = std::minmax(a, b);
        auto [it, fresh] = edge_ids.try_emplace({key.first, key.second}, n_edges());
        if (fresh) edges_.push_back(MeshEdge{key.first, key.second, -1, -1});
        MeshEdge& e = edges_[static_cast<std::size_t>(it->second)];
        int& side = a == e.v0 ? e.cell_left : e.cell_right;
        if (side >= 0)
          throw ConfigError("mesh: edge (" + std::to_string(a) + "," + std::to_string(b) +
                            ") traversed twice in the same direction near cell " + std::to_string(c));
        side = c;
        cell_edges_[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] = it->second;
      }
    }

    for (const MeshEdge& e : edges_)
      if (e.cell_left < 0 && e.cell_right < 0)
        throw ConfigError("mesh: dangling edge");  // unreachable by construction

    boundary_vertex_.assign(vertices_.size(), false);
    for (const MeshEdge& e : edges_)
      if (e.boundary()) {
        boundary_vertex_[static_cast<std::size_t>(e.v0)] = true;
        boundary_vertex_[static_cast<std::size_t>(e.v1)] = true;
      }

    vertex_h_.assign(vertices_.size(), 0.0);
    std::vector<int> valence(vertices_.size(), 0);
    mesh_size_ = 0.0;
    for (int c = 0; c < n_cells(); ++c) {
      mesh_size_ = std::max(mesh_size_, geometry_[static_cast<std::size_t>(c)].diameter);
      for (int v : cell(c)) {
        vertex_h_[static_cast<std::size_t>(v)] += geometry_[static_cast<std::size_t>(c)].diameter;
        ++valence[static_cast<std::size_t>(v)];
      }
    }
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (valence[v] == 0) throw ConfigError("mesh: vertex " + std::to_string(v) + " unused");
      vertex_h_[v] /= valence[v];
    }
  }

  // Reject self-intersecting cell boundaries (non-adjacent edge pairs only).
  void check_simple(int c, const std::vector<int>& poly) const {
    const int k = static_cast<int>(poly.size());
    auto pt = [&](int i) { return vertex(poly[static_cast<std::size_t>(i % k)]); };
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (j == i || (j + 1) % k == i || (i + 1) % k == j) continue;
        if (segments_cross(pt(i), pt(i + 1), pt(j), pt(j + 1)))
          throw ConfigError("mesh: cell " + std::to_string(c) + " is self-intersecting");
      }
    }
  }

  static bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
      return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
  }

  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::map<int, Vec2> star_points_;
  std::vector<MeshEdge> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<CellGeometry> geometry_;
  std::vector<double> vertex_h_;
  std::vector<bool> boundary_vertex_;
  double mesh_size_ = 0.0;
};

/// Wrap a single polygon (counterclockwise vertex list) as a one-cell mesh.
inline Mesh single_cell_mesh(const std::vector<Vec2>& polygon) {
  std::vector<int> cell(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i) cell[i] = static_cast<int>(i);
  return Mesh(polygon, {cell});
}

}  // namespace polyvem

#endif
