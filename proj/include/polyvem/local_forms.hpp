// Stabilized local stiffness matrix and load vector.

#ifndef POLYVEM_LOCAL_FORMS_HPP
#define POLYVEM_LOCAL_FORMS_HPP

#include <functional>

#include "polyvem/element_operators.hpp"

namespace polyvem {

/// Scaling of the dofi-dofi stabilization: the scaled DOFs are dimensionless,
/// so h^{2(1-p1)} restores the scaling of the p1-order form in 2D.
inline double stabilization_factor(int p1, double h) { return std::pow(h, 2 * (1 - p1)); }

/// Dofi-dofi stabilization applied on the complement of the projector range:
/// S(u, v) = factor * ((I - D Pi) u) . ((I - D Pi) v).
inline Eigen::MatrixXd stabilization_matrix(const ElementOperators& ops) {
  const Eigen::MatrixXd residual =
      Eigen::MatrixXd::Identity(ops.n_dofs(), ops.n_dofs()) - ops.d_matrix() * ops.pi_star();
  return stabilization_factor(ops.params().p1, ops.geometry().diameter) *
         (residual.transpose() * residual);
}

/// K = Pi^T G_a Pi + S, consistent on polynomials and stable on the kernel
/// of the projection.
inline Eigen::MatrixXd local_stiffness(const ElementOperators& ops) {
  const Eigen::MatrixXd& pi = ops.pi_star();
  return pi.transpose() * ops.stiffness_gram() * pi + stabilization_matrix(ops);
}

/// Load vector b_i = int_P (Pi0 f)(Pi0 phi_i): through the cell moments when
/// r is large enough, otherwise through the enhanced-space projector.
inline Eigen::VectorXd local_load(const ElementOperators& ops,
                                  const std::function<double(const Vec2&)>& f) {
  const SpaceParams& s = ops.params();
  const int target = s.load_case_a() ? s.r - 2 * s.p1 : s.r - s.p1;
  const int n = basis_count(target);
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(n);
  const QuadratureRule& rule = ops.cell_quadrature();
  for (int p = 0; p < rule.size(); ++p) {
    const Vec2 x(rule.points(p, 0), rule.points(p, 1));
    moments.noalias() += rule.weights[p] * f(x) * ops.basis().values_at(x).head(n);
  }
  // b = Pi0^T m  (exactly int (Pi0 f)(Pi0 phi_i); the Gram solve for f cancels)
  if (s.load_case_a()) return ops.pi0_low().transpose() * moments;
  return ops.pi0_enhanced().transpose() * moments;
}

}  // namespace polyvem

#endif
