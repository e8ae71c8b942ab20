// Application of the DOF functionals to explicitly known functions:
// polynomials (exact) and smooth manufactured solutions (for interpolation
// and boundary data).

#ifndef POLYVEM_DOF_FUNCTIONALS_HPP
#define POLYVEM_DOF_FUNCTIONALS_HPP

#include "polyvem/quadrature.hpp"
#include "polyvem/space.hpp"

namespace polyvem {

/// Anything that can report D^(dx,dy) u at a point.
class DerivativeOracle {
 public:
  virtual ~DerivativeOracle() = default;
  virtual double derivative(int dx, int dy, const Vec2& x) const = 0;
  double value(const Vec2& x) const { return derivative(0, 0, x); }
};

/// d_n^j u at a point from Cartesian derivatives (n constant).
inline double normal_derivative(const DerivativeOracle& u, const Vec2& n, int j, const Vec2& x) {
  double sum = 0.0;
  for (int i = 0; i <= j; ++i)
    sum += binomial(j, i) * std::pow(n.x(), i) * std::pow(n.y(), j - i) * u.derivative(i, j - i, x);
  return sum;
}

/// All DOF values of a polynomial for one cell layout (the column the
/// DOFs-of-monomials matrix holds for each monomial).
inline Eigen::VectorXd dofs_of_polynomial(const PolyCoeffs& q, const LocalDofLayout& layout,
                                          const Mesh& mesh) {
  const CellGeometry& g = mesh.geometry(layout.cell);
  const auto& poly = mesh.cell(layout.cell);
  Eigen::VectorXd out(layout.size());
  const int qd = std::max(q.degree(), 0);
  for (int i = 0; i < layout.size(); ++i) {
    const DofDescriptor& dof = layout.dofs[static_cast<std::size_t>(i)];
    if (const auto* vd = std::get_if<VertexDerivativeDof>(&dof)) {
      const int v = poly[static_cast<std::size_t>(vd->vertex)];
      out[i] = std::pow(mesh.vertex_length(v), vd->nu.order()) *
               q.differentiate(vd->nu).evaluate(mesh.vertex(v));
    } else if (const auto* em = std::get_if<EdgeMomentDof>(&dof)) {
      const EdgeFrame& frame = g.edges[static_cast<std::size_t>(em->edge)];
      PolyCoeffs dq = q;
      for (int jj = 0; jj < em->j; ++jj) dq = dq.directional_derivative(frame.normal);
      const QuadratureRule rule = edge_rule(frame, qd + em->moment);
      double sum = 0.0;
      for (int p = 0; p < rule.size(); ++p) {
        const Vec2 x(rule.points(p, 0), rule.points(p, 1));
        const double sref = 2.0 * (x - frame.midpoint).dot(frame.tangent) / frame.length;
        sum += rule.weights[p] * legendre_values(em->moment, sref)[em->moment] * dq.evaluate(x);
      }
      out[i] = std::pow(frame.length, -1 + em->j) * sum;
    } else {
      const auto& cm = std::get<CellMomentDof>(dof);
      const QuadratureRule rule = cell_rule(mesh, layout.cell, qd + cm.nu.order());
      const PolyCoeffs m = PolyCoeffs::monomial(ScaledMonomialBasis{g.centroid, g.diameter, 0}, cm.nu);
      double sum = 0.0;
      for (int p = 0; p < rule.size(); ++p) {
        const Vec2 x(rule.points(p, 0), rule.points(p, 1));
        sum += rule.weights[p] * m.evaluate(x) * q.evaluate(x);
      }
      out[i] = sum / (g.diameter * g.diameter);
    }
  }
  return out;
}

/// All DOF values of a smooth function for one cell layout; integrals use a
/// rule exact to quad_degree plus the moment degree.
inline Eigen::VectorXd dofs_of_function(const DerivativeOracle& u, const LocalDofLayout& layout,
                                        const Mesh& mesh, int quad_degree) {
  const CellGeometry& g = mesh.geometry(layout.cell);
  const auto& poly = mesh.cell(layout.cell);
  Eigen::VectorXd out(layout.size());
  for (int i = 0; i < layout.size(); ++i) {
    const DofDescriptor& dof = layout.dofs[static_cast<std::size_t>(i)];
    if (const auto* vd = std::get_if<VertexDerivativeDof>(&dof)) {
      const int v = poly[static_cast<std::size_t>(vd->vertex)];
      out[i] = std::pow(mesh.vertex_length(v), vd->nu.order()) *
               u.derivative(vd->nu.nu1, vd->nu.nu2, mesh.vertex(v));
    } else if (const auto* em = std::get_if<EdgeMomentDof>(&dof)) {
      const EdgeFrame& frame = g.edges[static_cast<std::size_t>(em->edge)];
      const QuadratureRule rule = edge_rule(frame, quad_degree + em->moment);
      double sum = 0.0;
      for (int p = 0; p < rule.size(); ++p) {
        const Vec2 x(rule.points(p, 0), rule.points(p, 1));
        const double sref = 2.0 * (x - frame.midpoint).dot(frame.tangent) / frame.length;
        sum += rule.weights[p] * legendre_values(em->moment, sref)[em->moment] *
               normal_derivative(u, frame.normal, em->j, x);
      }
      out[i] = std::pow(frame.length, -1 + em->j) * sum;
    } else {
      const auto& cm = std::get<CellMomentDof>(dof);
      const QuadratureRule rule = cell_rule(mesh, layout.cell, quad_degree + cm.nu.order());
      const PolyCoeffs m = PolyCoeffs::monomial(ScaledMonomialBasis{g.centroid, g.diameter, 0}, cm.nu);
      double sum = 0.0;
      for (int p = 0; p < rule.size(); ++p) {
        const Vec2 x(rule.points(p, 0), rule.points(p, 1));
        sum += rule.weights[p] * m.evaluate(x) * u.value(x);
      }
      out[i] = sum / (g.diameter * g.diameter);
    }
  }
  return out;
}

}  // namespace polyvem

#endif
