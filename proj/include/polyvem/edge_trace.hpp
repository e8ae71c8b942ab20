// Edge-local polynomials in a scaled Legendre basis and the reconstruction of
// the traces d_n^j v on a cell edge from the degrees of freedom: a two-point
// Hermite interpolation problem augmented with the edge moments.

#ifndef POLYVEM_EDGE_TRACE_HPP
#define POLYVEM_EDGE_TRACE_HPP

#include <Eigen/Dense>

#include "polyvem/legendre.hpp"
#include "polyvem/space.hpp"

namespace polyvem {

/// Univariate polynomial on an edge, p(s) = sum_k c_k P_k(2s/h) with s the
/// arclength from the edge midpoint.
struct EdgePoly {
  double length = 0.0;
  Eigen::VectorXd coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double value(double s) const {
    if (coeffs.size() == 0) return 0.0;
    return legendre_values(degree(), 2.0 * s / length).dot(coeffs);
  }

  /// d/ds as a new EdgePoly (chain rule factor 2/h).
  EdgePoly derivative() const {
    EdgePoly out;
    out.length = length;
    if (coeffs.size() <= 1) {
      out.coeffs = Eigen::VectorXd::Zero(1);
      return out;
    }
    Eigen::VectorXd d = legendre_derivative_matrix(degree()) * coeffs * (2.0 / length);
    out.coeffs = d.head(coeffs.size() - 1);
    return out;
  }
};

/// Matrices mapping the local DOF vector of a cell to the Legendre
/// coefficients of the traces of d_n^j v on each local edge (in the cell's
/// own traversal orientation).
class TraceOperators {
 public:
  TraceOperators(const Mesh& mesh, int cell, const LocalDofLayout& layout)
      : length_(mesh.geometry(cell).edges.size()) {
    const SpaceParams& s = layout.params;
    const CellGeometry& g = mesh.geometry(cell);
    const auto& poly = mesh.cell(cell);
    const int k = static_cast<int>(poly.size());
    ops_.resize(static_cast<std::size_t>(k));
    for (int e = 0; e < k; ++e) {
      ops_[static_cast<std::size_t>(e)].resize(static_cast<std::size_t>(s.p2));
      const EdgeFrame& frame = g.edges[static_cast<std::size_t>(e)];
      const double h = frame.length;
      length_[static_cast<std::size_t>(e)] = h;
      for (int j = 0; j <= s.p2 - 1; ++j) {
        const int nc = trace_degree(j, s) + 1;
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nc, nc);
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(nc, layout.size());
        int row = 0;
        for (int ep = 0; ep < 2; ++ep) {
          const int sign = ep == 0 ? -1 : 1;
          const int local_vertex = ep == 0 ? e : (e + 1) % k;
          const double hv = mesh.vertex_length(poly[static_cast<std::size_t>(local_vertex)]);
          for (int l = 0; l <= s.p2 - 1 - j; ++l) {
            const double chain = std::pow(2.0 / h, l);
            for (int c = 0; c < nc; ++c)
              M(row, c) = chain * legendre_endpoint_derivative(c, l, sign);
            const auto w = frame_derivative_weights(frame.tangent, l, frame.normal, j);
            const double descale = std::pow(hv, -(l + j));
            for (int nu1 = 0; nu1 <= l + j; ++nu1) {
              const int dof = layout.vertex_block(local_vertex) +
                              position_of(MultiIndex{nu1, l + j - nu1});
              R(row, dof) += w[static_cast<std::size_t>(nu1)] * descale;
            }
            ++row;
          }
        }
        for (int m = 0; m < edge_moment_count(j, s); ++m) {
          M(row, m) = h / (2 * m + 1);  // Legendre orthogonality
          const int dof = layout.edge_block(e) + layout.edge_moment_offset(j, m);
          R(row, dof) = std::pow(h, 1 - j);
          ++row;
        }
        ops_[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)] = M.fullPivLu().solve(R);
      }
    }
  }

  /// Legendre-coefficient matrix of the trace of d_n^j v on local edge e.
  const Eigen::MatrixXd& matrix(int e, int j) const {
    return ops_[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)];
  }

  double edge_length(int e) const { return length_[static_cast<std::size_t>(e)]; }

  EdgePoly trace(const Eigen::VectorXd& dof_values, int e, int j) const {
    EdgePoly p;
    p.length = edge_length(e);
    p.coeffs = matrix(e, j) * dof_values;
    return p;
  }

 private:
  std::vector<std::vector<Eigen::MatrixXd>> ops_;
  std::vector<double> length_;
};

/// Reconstructs the trace of d_n^j v on a cell edge from local DOF values.
inline EdgePoly build_edge_trace(const Mesh& mesh, int cell, const LocalDofLayout& layout,
                                 const Eigen::VectorXd& dof_values, int local_edge, int j) {
  return TraceOperators(mesh, cell, layout).trace(dof_values, local_edge, j);
}

}  // namespace polyvem

#endif
