// Discrete space description for a parameter triple (p1, p2, r):
// trace degrees, per-kind degree-of-freedom counts, local enumeration, and
// the vertex frame-change machinery shared by traces and boundary conditions.
//
// Degrees of freedom (with their scaling conventions):
//   vertex:      h_V^{|nu|} D^nu v(V),            |nu| <= p2-1
//   edge moment: h_E^{-1+j} int_E q d_n^j v ds,   q Legendre of degree < moment count
//   cell moment: h_P^{-2}   int_P q v dx,         q scaled monomial, deg <= r-2*p1
// Extended layouts append cell moments for r-2*p1 < deg <= r-p1.

#ifndef POLYVEM_SPACE_HPP
#define POLYVEM_SPACE_HPP

#include <string>
#include <variant>
#include <vector>

#include "polyvem/mesh.hpp"
#include "polyvem/multi_index.hpp"
#include "polyvem/polynomial.hpp"

namespace polyvem {

struct SpaceParams {
  int p1 = 1;       // operator order
  int p2 = 1;       // regularity index
  int r = 1;        // accuracy order
  bool enhanced = false;

  /// Validates r >= p2 >= p1 >= 1 and forces the enhanced space whenever the
  /// load must be projected onto P_{r-p1} (r <= p2 + 2*p1 - 2).
  static SpaceParams make(int p1, int p2, int r, bool enhanced = false) {
    if (!(p1 >= 1 && p2 >= p1 && r >= p2))
      throw ConfigError("space parameters must satisfy r >= p2 >= p1 >= 1, got (" +
                        std::to_string(p1) + "," + std::to_string(p2) + "," + std::to_string(r) + ")");
    SpaceParams s;
    s.p1 = p1;
    s.p2 = p2;
    s.r = r;
    s.enhanced = enhanced || r <= p2 + 2 * p1 - 2;
    return s;
  }

  /// True when the load can be handled through cell moments alone.
  bool load_case_a() const { return p2 + 2 * p1 - 1 <= r; }

  int vertex_dofs() const { return p2 * (p2 + 1) / 2; }

  std::string str() const {
    return "(" + std::to_string(p1) + "," + std::to_string(p2) + "," + std::to_string(r) + ")";
  }
};

/// Degree of the edge trace of d_n^j v.
inline int trace_degree(int j, const SpaceParams& s) {
  if (j < 0 || j > s.p2 - 1)
    throw ConfigError("trace_degree: derivative order " + std::to_string(j) + " out of range for p2=" +
                      std::to_string(s.p2));
  return std::max(2 * (s.p2 - j) - 1, s.r - j);
}

/// Number of edge moments attached to d_n^j v. Covers both trace regimes:
/// zero while the two-point Hermite data determines the trace, and the
/// dimension of the matching moment space once r outgrows it.
inline int edge_moment_count(int j, const SpaceParams& s) {
  if (j < 0 || j > s.p2 - 1)
    throw ConfigError("edge_moment_count: derivative order out of range");
  return std::max(0, s.r - 2 * s.p2 + j + 1);
}

inline int edge_moment_total(const SpaceParams& s) {
  int total = 0;
  for (int j = 0; j <= s.p2 - 1; ++j) total += edge_moment_count(j, s);
  return total;
}

inline int cell_moment_count(const SpaceParams& s, bool extended = false) {
  const int low = basis_count(s.r - 2 * s.p1);
  return extended ? basis_count(s.r - s.p1) : low;
}

/// Dimension of the local space on a polygon with n_vertices vertices,
/// evaluated through the closed-form counts (equal to direct enumeration).
inline int local_dim(const SpaceParams& s, int n_vertices, bool extended = false) {
  const int n_edges = n_vertices;
  int per_edge_traces = 0;
  for (int j = 0; j <= s.p2 - 1; ++j) per_edge_traces += trace_degree(j, s) + 1;
  return cell_moment_count(s, extended) + n_edges * per_edge_traces -
         n_vertices * s.p2 * (s.p2 + 1) / 2;
}

struct VertexDerivativeDof {
  int vertex = 0;  // local vertex position within the cell
  MultiIndex nu;
};

struct EdgeMomentDof {
  int edge = 0;    // local edge position within the cell
  int j = 0;       // normal-derivative order
  int moment = 0;  // Legendre moment index
};

struct CellMomentDof {
  MultiIndex nu;
  bool extra = false;  // true for the extended-space moments
};

using DofDescriptor = std::variant<VertexDerivativeDof, EdgeMomentDof, CellMomentDof>;

/// Ordered list of the degrees of freedom of one cell: vertex blocks first
/// (vertex-major, graded-lex), then edge blocks (edge-major, j ascending,
/// moment ascending), then cell moments (graded-lex), then extended moments.
struct LocalDofLayout {
  SpaceParams params;
  int cell = 0;
  int n_vertices = 0;
  std::vector<DofDescriptor> dofs;

  int size() const { return static_cast<int>(dofs.size()); }

  int vertex_block(int local_vertex) const { return local_vertex * params.vertex_dofs(); }

  int edge_block(int local_edge) const {
    return n_vertices * params.vertex_dofs() + local_edge * edge_moment_total(params);
  }

  int edge_moment_offset(int j, int moment) const {
    int off = 0;
    for (int jj = 0; jj < j; ++jj) off += edge_moment_count(jj, params);
    return off + moment;
  }

  int cell_block() const {
    return n_vertices * (params.vertex_dofs() + edge_moment_total(params));
  }
};

inline LocalDofLayout enumerate_local(const SpaceParams& s, const Mesh& mesh, int cell,
                                      bool extended = false) {
  LocalDofLayout layout;
  layout.params = s;
  layout.cell = cell;
  const int k = static_cast<int>(mesh.cell(cell).size());
  layout.n_vertices = k;
  layout.dofs.reserve(static_cast<std::size_t>(local_dim(s, k, extended)));
  const auto vertex_nu = multi_indices_upto(s.p2 - 1);
  for (int v = 0; v < k; ++v)
    for (const MultiIndex& nu : vertex_nu) layout.dofs.push_back(VertexDerivativeDof{v, nu});
  for (int e = 0; e < k; ++e)
    for (int j = 0; j <= s.p2 - 1; ++j)
      for (int m = 0; m < edge_moment_count(j, s); ++m)
        layout.dofs.push_back(EdgeMomentDof{e, j, m});
  for (const MultiIndex& nu : multi_indices_upto(s.r - 2 * s.p1))
    layout.dofs.push_back(CellMomentDof{nu, false});
  if (extended) {
    for (const MultiIndex& nu : multi_indices_upto(s.r - s.p1))
      if (nu.order() > s.r - 2 * s.p1) layout.dofs.push_back(CellMomentDof{nu, true});
  }
  return layout;
}

/// Coefficients c_nu of the expansion (t.grad)^l (n.grad)^j = sum c_nu D^nu
/// over |nu| = l + j, returned indexed by nu1 = 0..l+j. Both factors expand
/// binomially and the result is their convolution.
inline std::vector<double> frame_derivative_weights(const Vec2& t, int l, const Vec2& n, int j) {
  std::vector<double> a(static_cast<std::size_t>(l + 1));
  std::vector<double> b(static_cast<std::size_t>(j + 1));
  for (int i = 0; i <= l; ++i)
    a[static_cast<std::size_t>(i)] = binomial(l, i) * std::pow(t.x(), i) * std::pow(t.y(), l - i);
  for (int i = 0; i <= j; ++i)
    b[static_cast<std::size_t>(i)] = binomial(j, i) * std::pow(n.x(), i) * std::pow(n.y(), j - i);
  std::vector<double> c(static_cast<std::size_t>(l + j + 1), 0.0);
  for (int u = 0; u <= l; ++u)
    for (int v = 0; v <= j; ++v)
      c[static_cast<std::size_t>(u + v)] += a[static_cast<std::size_t>(u)] * b[static_cast<std::size_t>(v)];
  return c;
}

/// d_t^l d_n^j v from the Cartesian derivatives of v at a point.
/// cart_values holds D^nu v in enumeration order (up to some degree >= l+j).
inline double frame_derivative(const Eigen::VectorXd& cart_values, const Vec2& n, const Vec2& t,
                               int j, int l) {
  const auto w = frame_derivative_weights(t, l, n, j);
  const int d = l + j;
  double sum = 0.0;
  for (int nu1 = 0; nu1 <= d; ++nu1)
    sum += w[static_cast<std::size_t>(nu1)] * cart_values[position_of(MultiIndex{nu1, d - nu1})];
  return sum;
}

struct EdgeLaplacianTerm {
  double coeff = 0.0;
  int tangential_order = 0;
  int normal_order = 0;
};

/// Expansion of the edge restriction of Delta^mu v into pure frame
/// derivatives: Delta^mu = (d_tt + d_nn)^mu = sum_nu C(mu,nu) d_t^{2(mu-nu)} d_n^{2nu}.
inline std::vector<EdgeLaplacianTerm> edge_laplacian_expansion(int mu) {
  std::vector<EdgeLaplacianTerm> terms;
  terms.reserve(static_cast<std::size_t>(mu + 1));
  for (int nu = 0; nu <= mu; ++nu)
    terms.push_back(EdgeLaplacianTerm{binomial(mu, nu), 2 * (mu - nu), 2 * nu});
  return terms;
}

}  // namespace polyvem

#endif
