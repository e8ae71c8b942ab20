// Per-element operator construction: the DOFs-of-monomials matrix, the exact
// local form and L2 Gram matrices of the scaled monomials, the computable
// form rows (integration by parts against a polynomial, with every volume
// derivative landing on the polynomial), the elliptic projectors, and the L2
// projectors (plain and enhanced).
//
// The local bilinear form of order p1 is the full derivative inner product
//   a_P(u, v) = sum_{|alpha| = p1} binom(p1, alpha) int_P D^alpha u D^alpha v,
// whose elementwise sum over a mesh equals int Delta^l u Delta^l v (p1 = 2l)
// resp. int grad Delta^l u . grad Delta^l v (p1 = 2l+1) for functions with
// clamped boundary data, and whose polynomial kernel is exactly P_{p1-1}.

#ifndef POLYVEM_ELEMENT_OPERATORS_HPP
#define POLYVEM_ELEMENT_OPERATORS_HPP

#include <Eigen/Dense>

#include "polyvem/edge_trace.hpp"
#include "polyvem/quadrature.hpp"
#include "polyvem/space.hpp"

namespace polyvem {

/// a_P(a, b) over one cell for explicit polynomials.
inline double poly_bilinear(const PolyCoeffs& a, const PolyCoeffs& b, int p1,
                            const QuadratureRule& rule) {
  double sum = 0.0;
  for (int i = 0; i <= p1; ++i) {
    const MultiIndex alpha{i, p1 - i};
    const PolyCoeffs da = a.differentiate(alpha);
    const PolyCoeffs db = b.differentiate(alpha);
    if (da.coeffs().size() == 0 || db.coeffs().size() == 0) continue;
    sum += binomial(p1, i) *
           rule.integrate([&](const Vec2& x) { return da.evaluate(x) * db.evaluate(x); });
  }
  return sum;
}

class ElementOperators {
 public:
  ElementOperators(const Mesh& mesh, int cell, const SpaceParams& params)
      : mesh_(&mesh), cell_(cell), params_(params),
        layout_(enumerate_local(params, mesh, cell)),
        geom_(mesh.geometry(cell)),
        basis_{geom_.centroid, geom_.diameter, params.r},
        traces_(mesh, cell, layout_) {
    const int r = params_.r;
    nr_ = basis_count(r);
    alpha0_ = trace_degree(0, params_);
    cell_quad_ = cell_rule(mesh, cell, 2 * r + 2 * params_.p1 + 2);
    const int edge_degree = std::max(2 * r, r + alpha0_) + 2;
    const int k = static_cast<int>(geom_.edges.size());
    edge_quads_.reserve(static_cast<std::size_t>(k));
    for (int e = 0; e < k; ++e)
      edge_quads_.push_back(edge_rule(geom_.edges[static_cast<std::size_t>(e)], edge_degree));

    cell_basis_values_ = basis_values_at(cell_quad_.points);
    build_monomials();
    build_mass_and_stiffness();
    build_trace_derivatives();
    build_boundary_gram();
    build_d_matrix();
    build_consistency_rows();
    pi_star_ = elliptic_projector(r);
    build_l2_projectors();
  }

  const SpaceParams& params() const { return params_; }
  const LocalDofLayout& layout() const { return layout_; }
  const CellGeometry& geometry() const { return geom_; }
  const ScaledMonomialBasis& basis() const { return basis_; }
  const QuadratureRule& cell_quadrature() const { return cell_quad_; }
  const TraceOperators& trace_operators() const { return traces_; }
  int n_dofs() const { return layout_.size(); }
  int n_poly() const { return nr_; }

  /// DOFs-of-monomials matrix, n_dofs x card(P_r).
  const Eigen::MatrixXd& d_matrix() const { return d_; }
  /// L2 Gram of the scaled monomials up to degree r.
  const Eigen::MatrixXd& mass() const { return mass_; }
  /// Local-form Gram of the scaled monomials up to degree r.
  const Eigen::MatrixXd& stiffness_gram() const { return stiff_a_; }
  /// Boundary L2 Gram int_{dP} m_i m_j ds.
  const Eigen::MatrixXd& boundary_gram() const { return boundary_gram_; }
  /// Computable rows a_P(m_k, phi_i), card(P_r) x n_dofs.
  const Eigen::MatrixXd& consistency_rows() const { return b_; }
  /// Elliptic projector onto P_r (coefficients from DOF values).
  const Eigen::MatrixXd& pi_star() const { return pi_star_; }
  /// Elliptic projector onto P_{r-p1} (enhanced space machinery).
  const Eigen::MatrixXd& pi_star_low() const { return pi_star_low_; }
  /// L2 projector onto P_{r-2 p1} from the cell moments.
  const Eigen::MatrixXd& pi0_low() const { return pi0_low_; }

  /// L2 projector onto P_{r-p1}; defined only for the enhanced space.
  const Eigen::MatrixXd& pi0_enhanced() const {
    if (!params_.enhanced)
      throw ConfigError("pi0_enhanced requires SpaceParams.enhanced = true");
    return pi0_enh_;
  }

  /// Row functional v -> a_P(q, v) over the local DOF values. Every component
  /// int_P D^alpha q D^alpha v is integrated by parts until all volume
  /// derivatives sit on q (the volume term then reads off the cell moments,
  /// since the multinomial sum of the D^{2 alpha} collapses to Delta^{p1});
  /// the peeled boundary terms only need traces of D^beta v with
  /// |beta| <= p1 - 1, reconstructed from the vertex and edge data.
  Eigen::RowVectorXd a_form_row(const PolyCoeffs& q) const {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(layout_.size());
    const int p1 = params_.p1;
    const double h2 = geom_.diameter * geom_.diameter;

    {
      const PolyCoeffs qv = q.laplacian_power(p1);
      const double sign = (p1 % 2 == 0) ? 1.0 : -1.0;
      const int n_low = std::min<int>(basis_count(params_.r - 2 * params_.p1),
                                      static_cast<int>(qv.coeffs().size()));
      for (int a = 0; a < n_low; ++a)
        row[layout_.cell_block() + a] += sign * h2 * qv.coeffs()[a];
      for (int a = n_low; a < qv.coeffs().size(); ++a)
        if (qv.coeffs()[a] != 0.0)
          throw NumericalError("a_form_row: polynomial degree exceeds the moment space");
    }

    const int k = static_cast<int>(geom_.edges.size());
    for (int e = 0; e < k; ++e) {
      const EdgeFrame& frame = geom_.edges[static_cast<std::size_t>(e)];
      const QuadratureRule& eq = edge_quads_[static_cast<std::size_t>(e)];
      for (int a = 0; a <= p1; ++a) {
        const int b = p1 - a;
        const double weight = binomial(p1, a);
        // peel the x-derivatives first, then the y-derivatives
        for (int j = 1; j <= a; ++j) {
          const PolyCoeffs dq = q.differentiate(MultiIndex{a + j - 1, b});
          const double sign = weight * ((j - 1) % 2 == 0 ? 1.0 : -1.0) * frame.normal.x();
          accumulate_edge_term(row, eq, frame, dq, cartesian_trace(e, a - j, b), sign);
        }
        for (int j = 1; j <= b; ++j) {
          const PolyCoeffs dq = q.differentiate(MultiIndex{2 * a, b + j - 1});
          const double sign = weight * ((a + j - 1) % 2 == 0 ? 1.0 : -1.0) * frame.normal.y();
          accumulate_edge_term(row, eq, frame, dq, cartesian_trace(e, 0, b - j), sign);
        }
      }
    }
    return row;
  }

  /// a_P(q, v_h) for the virtual function with the given DOF values.
  double a_poly_vs_dofs(const PolyCoeffs& q, const Eigen::VectorXd& dof_values) const {
    return a_form_row(q).dot(dof_values);
  }

  /// Elliptic projector onto P_s: form-orthogonality rows for monomials above
  /// the kernel, boundary-integral closure rows on the kernel part.
  Eigen::MatrixXd elliptic_projector(int target_degree) const {
    const int ns = basis_count(target_degree);
    const int closure_degree = std::min(target_degree, params_.p1 - 1);
    const int nc = basis_count(closure_degree);
    Eigen::MatrixXd A(ns, ns), rhs(ns, layout_.size());
    A.topRows(nc) = boundary_gram_.topLeftCorner(nc, ns);
    rhs.topRows(nc) = boundary_dof_rows_.topRows(nc);
    if (ns > nc) {
      A.bottomRows(ns - nc) = stiff_a_.block(nc, 0, ns - nc, ns);
      rhs.bottomRows(ns - nc) = b_.middleRows(nc, ns - nc);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
      throw NumericalError("elliptic projector system is singular on cell " + std::to_string(cell_));
    return lu.solve(rhs);
  }

  /// Legendre-coefficient matrix (over DOFs) of the trace of D^{(c,d)} v on
  /// local edge e, padded to length alpha_0 + 1. Expands the Cartesian
  /// derivatives in the edge frame, d_x = t_x d_t + n_x d_n and likewise for
  /// d_y, and differentiates the reconstructed traces tangentially.
  Eigen::MatrixXd cartesian_trace(int e, int c, int d) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(alpha0_ + 1, layout_.size());
    const EdgeFrame& frame = geom_.edges[static_cast<std::size_t>(e)];
    for (int i = 0; i <= c; ++i)
      for (int j = 0; j <= d; ++j) {
        const int normal_order = i + j;
        const int tangential_order = c + d - normal_order;
        const double coef = binomial(c, i) * binomial(d, j) *
                            std::pow(frame.tangent.x(), c - i) * std::pow(frame.normal.x(), i) *
                            std::pow(frame.tangent.y(), d - j) * std::pow(frame.normal.y(), j);
        if (coef == 0.0) continue;
        out += coef * trace_derivative(e, normal_order, tangential_order);
      }
    return out;
  }

  /// Monomial values at a set of points, columns in enumeration order.
  Eigen::MatrixXd basis_values_at(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) const {
    Eigen::MatrixXd v(pts.rows(), basis_.size());
    for (int p = 0; p < pts.rows(); ++p)
      v.row(p) = basis_.values_at(Vec2(pts(p, 0), pts(p, 1))).transpose();
    return v;
  }

  /// Evaluate a coefficient vector (degree <= r) at the cell quadrature points.
  Eigen::VectorXd values_on_cell_quad(const Eigen::VectorXd& coeffs) const {
    return cell_basis_values_.leftCols(coeffs.size()) * coeffs;
  }

 private:
  void build_monomials() {
    monomials_.reserve(static_cast<std::size_t>(nr_));
    for (int i = 0; i < nr_; ++i)
      monomials_.push_back(PolyCoeffs::monomial(basis_, multi_index_at(i)));
  }

  void build_mass_and_stiffness() {
    const Eigen::VectorXd& w = cell_quad_.weights;
    mass_ = cell_basis_values_.transpose() * w.asDiagonal() * cell_basis_values_;

    stiff_a_ = Eigen::MatrixXd::Zero(nr_, nr_);
    for (int i = 0; i <= params_.p1; ++i) {
      const MultiIndex alpha{i, params_.p1 - i};
      Eigen::MatrixXd da = Eigen::MatrixXd::Zero(cell_quad_.size(), nr_);
      for (int kmono = 0; kmono < nr_; ++kmono) {
        const PolyCoeffs dm = monomials_[static_cast<std::size_t>(kmono)].differentiate(alpha);
        if (dm.coeffs().size() > 0) da.col(kmono) = values_on_cell_quad(dm.coeffs());
      }
      stiff_a_.noalias() += binomial(params_.p1, i) * da.transpose() * w.asDiagonal() * da;
    }
  }

  // dtrace_[e][m][s]: s-fold tangential derivative of the trace of d_n^m v,
  // as Legendre coefficients padded to alpha_0 + 1.
  void build_trace_derivatives() {
    const int k = static_cast<int>(geom_.edges.size());
    const int max_normal = std::min(params_.p1 - 1, params_.p2 - 1);
    dtrace_.resize(static_cast<std::size_t>(k));
    for (int e = 0; e < k; ++e) {
      const double h = geom_.edges[static_cast<std::size_t>(e)].length;
      const Eigen::MatrixXd ds = legendre_derivative_matrix(alpha0_) * (2.0 / h);
      auto& per_edge = dtrace_[static_cast<std::size_t>(e)];
      per_edge.resize(static_cast<std::size_t>(max_normal + 1));
      for (int m = 0; m <= max_normal; ++m) {
        auto& per_order = per_edge[static_cast<std::size_t>(m)];
        per_order.resize(static_cast<std::size_t>(params_.p1));
        Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(alpha0_ + 1, layout_.size());
        padded.topRows(traces_.matrix(e, m).rows()) = traces_.matrix(e, m);
        per_order[0] = padded;
        for (int s = 1; s <= params_.p1 - 1; ++s) per_order[static_cast<std::size_t>(s)] = ds * per_order[static_cast<std::size_t>(s - 1)];
      }
    }
  }

  const Eigen::MatrixXd& trace_derivative(int e, int normal_order, int tangential_order) const {
    return dtrace_[static_cast<std::size_t>(e)][static_cast<std::size_t>(normal_order)]
                  [static_cast<std::size_t>(tangential_order)];
  }

  void accumulate_edge_term(Eigen::RowVectorXd& row, const QuadratureRule& eq,
                            const EdgeFrame& frame, const PolyCoeffs& dq,
                            const Eigen::MatrixXd& trace, double sign) const {
    if (sign == 0.0 || dq.coeffs().size() == 0) return;
    for (int p = 0; p < eq.size(); ++p) {
      const Vec2 x(eq.points(p, 0), eq.points(p, 1));
      const double s = (x - frame.midpoint).dot(frame.tangent);
      const Eigen::VectorXd leg = legendre_values(alpha0_, 2.0 * s / frame.length);
      row.noalias() += (sign * eq.weights[p] * dq.evaluate(x)) * (leg.transpose() * trace);
    }
  }

  void build_boundary_gram() {
    boundary_gram_ = Eigen::MatrixXd::Zero(nr_, nr_);
    boundary_dof_rows_ = Eigen::MatrixXd::Zero(nr_, layout_.size());
    const int k = static_cast<int>(geom_.edges.size());
    for (int e = 0; e < k; ++e) {
      const EdgeFrame& frame = geom_.edges[static_cast<std::size_t>(e)];
      const QuadratureRule& eq = edge_quads_[static_cast<std::size_t>(e)];
      const Eigen::MatrixXd& t0 = traces_.matrix(e, 0);
      for (int p = 0; p < eq.size(); ++p) {
        const Vec2 x(eq.points(p, 0), eq.points(p, 1));
        const Eigen::VectorXd mv = basis_.values_at(x);
        const double s = (x - frame.midpoint).dot(frame.tangent);
        const Eigen::VectorXd leg = legendre_values(t0.rows() - 1, 2.0 * s / frame.length);
        boundary_gram_.noalias() += eq.weights[p] * mv * mv.transpose();
        boundary_dof_rows_.noalias() += eq.weights[p] * mv * (leg.transpose() * t0);
      }
    }
  }

  void build_d_matrix() {
    d_.resize(layout_.size(), nr_);
    const auto& poly = mesh_->cell(cell_);
    const int k = static_cast<int>(poly.size());
    const double h2 = geom_.diameter * geom_.diameter;

    for (int v = 0; v < k; ++v) {
      const Vec2 xv = mesh_->vertex(poly[static_cast<std::size_t>(v)]);
      const double hv = mesh_->vertex_length(poly[static_cast<std::size_t>(v)]);
      for (const MultiIndex& nu : multi_indices_upto(params_.p2 - 1)) {
        const int row = layout_.vertex_block(v) + position_of(nu);
        const double scale = std::pow(hv, nu.order());
        for (int kmono = 0; kmono < nr_; ++kmono)
          d_(row, kmono) =
              scale * monomials_[static_cast<std::size_t>(kmono)].differentiate(nu).evaluate(xv);
      }
    }
    for (int e = 0; e < k; ++e) {
      const EdgeFrame& frame = geom_.edges[static_cast<std::size_t>(e)];
      const QuadratureRule& eq = edge_quads_[static_cast<std::size_t>(e)];
      for (int j = 0; j <= params_.p2 - 1; ++j) {
        const int count = edge_moment_count(j, params_);
        if (count == 0) continue;
        std::vector<Eigen::VectorXd> dmono(static_cast<std::size_t>(nr_));
        for (int kmono = 0; kmono < nr_; ++kmono) {
          PolyCoeffs dq = monomials_[static_cast<std::size_t>(kmono)];
          for (int jj = 0; jj < j; ++jj) dq = dq.directional_derivative(frame.normal);
          Eigen::VectorXd vals = Eigen::VectorXd::Zero(eq.size());
          for (int p = 0; p < eq.size(); ++p)
            vals[p] = dq.evaluate(Vec2(eq.points(p, 0), eq.points(p, 1)));
          dmono[static_cast<std::size_t>(kmono)] = vals;
        }
        const double scale = std::pow(frame.length, -1 + j);
        for (int m = 0; m < count; ++m) {
          const int row = layout_.edge_block(e) + layout_.edge_moment_offset(j, m);
          for (int kmono = 0; kmono < nr_; ++kmono) {
            double sum = 0.0;
            for (int p = 0; p < eq.size(); ++p) {
              const Vec2 x(eq.points(p, 0), eq.points(p, 1));
              const double s = (x - frame.midpoint).dot(frame.tangent);
              sum += eq.weights[p] * legendre_values(m, 2.0 * s / frame.length)[m] *
                     dmono[static_cast<std::size_t>(kmono)][p];
            }
            d_(row, kmono) = scale * sum;
          }
        }
      }
    }
    const int n_low = basis_count(params_.r - 2 * params_.p1);
    for (int a = 0; a < n_low; ++a)
      d_.row(layout_.cell_block() + a) = mass_.row(a) / h2;
  }

  void build_consistency_rows() {
    b_.resize(nr_, layout_.size());
    for (int kmono = 0; kmono < nr_; ++kmono)
      b_.row(kmono) = a_form_row(monomials_[static_cast<std::size_t>(kmono)]);
  }

  void build_l2_projectors() {
    const double h2 = geom_.diameter * geom_.diameter;
    const int n_low = basis_count(params_.r - 2 * params_.p1);
    pi0_low_.resize(n_low, layout_.size());
    if (n_low > 0) {
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_low, layout_.size());
      for (int a = 0; a < n_low; ++a) rhs(a, layout_.cell_block() + a) = h2;
      pi0_low_ = mass_.topLeftCorner(n_low, n_low).llt().solve(rhs);
    }
    if (params_.enhanced) {
      const int n_en = basis_count(params_.r - params_.p1);
      pi_star_low_ = elliptic_projector(params_.r - params_.p1);
      Eigen::MatrixXd rhs(n_en, layout_.size());
      for (int a = 0; a < n_low; ++a) {
        rhs.row(a).setZero();
        rhs(a, layout_.cell_block() + a) = h2;
      }
      for (int a = n_low; a < n_en; ++a)
        rhs.row(a) = mass_.row(a).head(n_en) * pi_star_low_;
      pi0_enh_ = mass_.topLeftCorner(n_en, n_en).llt().solve(rhs);
    }
  }

  const Mesh* mesh_;
  int cell_;
  SpaceParams params_;
  LocalDofLayout layout_;
  CellGeometry geom_;
  ScaledMonomialBasis basis_;
  TraceOperators traces_;
  int nr_ = 0;
  int alpha0_ = 0;
  QuadratureRule cell_quad_;
  std::vector<QuadratureRule> edge_quads_;
  Eigen::MatrixXd cell_basis_values_;
  std::vector<PolyCoeffs> monomials_;
  std::vector<std::vector<std::vector<Eigen::MatrixXd>>> dtrace_;
  Eigen::MatrixXd d_, mass_, stiff_a_, boundary_gram_, boundary_dof_rows_, b_;
  Eigen::MatrixXd pi_star_, pi_star_low_, pi0_low_, pi0_enh_;
};

}  // namespace polyvem

#endif
