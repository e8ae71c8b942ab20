// Quadrature exact to a requested polynomial degree: Gauss-Legendre on edges,
// collapsed tensor-product Gauss rules on the centroid fan of a polygon.

#ifndef POLYVEM_QUADRATURE_HPP
#define POLYVEM_QUADRATURE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "polyvem/legendre.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (int q = 0; q < size(); ++q) sum += weights[q] * f(Vec2(points(q, 0), points(q, 1)));
    return sum;
  }
};

/// Gauss-Legendre rule along an edge, exact for polynomial traces of degree d.
inline QuadratureRule edge_rule(const EdgeFrame& edge, int d) {
  const int n = std::max(1, (d + 2) / 2);  // ceil((d+1)/2)
  Eigen::VectorXd nodes, w;
  gauss_legendre(n, nodes, w);
  QuadratureRule rule;
  rule.exactness = 2 * n - 1;
  rule.points.resize(n, 2);
  rule.weights.resize(n);
  for (int q = 0; q < n; ++q) {
    const Vec2 p = edge.point_at(0.5 * edge.length * nodes[q]);
    rule.points(q, 0) = p.x();
    rule.points(q, 1) = p.y();
    rule.weights[q] = 0.5 * edge.length * w[q];
  }
  return rule;
}

/// Rule on the polygon of cell c, built by fanning triangles from the star
/// point and collapsing a tensor Gauss rule onto each triangle.
inline QuadratureRule cell_rule(const Mesh& mesh, int c, int d) {
  const CellGeometry& g = mesh.geometry(c);
  const int n = std::max(1, (d + 3) / 2);  // Duffy collapse raises degree by one
  Eigen::VectorXd nodes, w;
  gauss_legendre(n, nodes, w);

  const int per_triangle = n * n;
  const int n_tri = static_cast<int>(g.edges.size());
  QuadratureRule rule;
  rule.exactness = d;
  rule.points.resize(n_tri * per_triangle, 2);
  rule.weights.resize(n_tri * per_triangle);

  int out = 0;
  for (int t = 0; t < n_tri; ++t) {
    const Vec2& v0 = g.star_point;
    const Vec2& v1 = g.edges[static_cast<std::size_t>(t)].a;
    const Vec2& v2 = g.edges[static_cast<std::size_t>(t)].b;
    const double twice_area =
        (v1.x() - v0.x()) * (v2.y() - v0.y()) - (v2.x() - v0.x()) * (v1.y() - v0.y());
    if (twice_area <= 0.0)
      throw NumericalError("cell_rule: degenerate fan triangle in cell " + std::to_string(c) +
                           " (star point not interior?)");
    for (int i = 0; i < n; ++i) {
      const double xi = 0.5 * (nodes[i] + 1.0);     // [0,1]
      for (int j = 0; j < n; ++j) {
        const double eta = 0.5 * (nodes[j] + 1.0);  // [0,1]
        // Duffy map: (xi, eta) -> v0 + xi*((1-eta)*(v1-v0) + eta*(v2-v0))
        const Vec2 p = v0 + xi * ((1.0 - eta) * (v1 - v0) + eta * (v2 - v0));
        rule.points(out, 0) = p.x();
        rule.points(out, 1) = p.y();
        rule.weights[out] = 0.25 * w[i] * w[j] * xi * twice_area;
        ++out;
      }
    }
  }
  return rule;
}

}  // namespace polyvem

#endif
