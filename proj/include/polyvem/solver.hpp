// Global problem: DOF numbering with edge-orientation signs, assembly of the
// stabilized stiffness and load, essential (clamped) boundary conditions by
// rank-revealing per-vertex elimination, sparse SPD solve, and error norms
// against a manufactured solution.

#ifndef POLYVEM_SOLVER_HPP
#define POLYVEM_SOLVER_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <chrono>

#include "polyvem/local_forms.hpp"
#include "polyvem/manufactured.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

/// Global enumeration: all vertex blocks, then all edge blocks, then cell
/// moments. Shared vertex/edge DOFs receive one index; edge moments are
/// stated in the orientation of the edge (lower vertex index first), and each
/// cell translates them with the sign (-1)^{j+m} when it traverses the edge
/// backwards (normal flips the j-th derivative, the Legendre moment flips
/// with the parameter direction).
class GlobalDofMap {
 public:
  GlobalDofMap(const Mesh& mesh, const SpaceParams& params) : mesh_(&mesh), params_(params) {
    per_vertex_ = params.vertex_dofs();
    per_edge_ = edge_moment_total(params);
    per_cell_ = cell_moment_count(params);
    vertex_total_ = mesh.n_vertices() * per_vertex_;
    edge_total_ = mesh.n_edges() * per_edge_;
    total_ = vertex_total_ + edge_total_ + mesh.n_cells() * per_cell_;
  }

  int size() const { return total_; }
  int vertex_dof(int v, const MultiIndex& nu) const { return v * per_vertex_ + position_of(nu); }

  int edge_dof(int e, int j, int m) const {
    int off = 0;
    for (int jj = 0; jj < j; ++jj) off += edge_moment_count(jj, params_);
    return vertex_total_ + e * per_edge_ + off + m;
  }

  int cell_dof(int c, int a) const { return vertex_total_ + edge_total_ + c * per_cell_ + a; }

  /// Global index and orientation sign for every local DOF of a cell.
  void cell_map(int c, const LocalDofLayout& layout, Eigen::VectorXi& index,
                Eigen::VectorXd& sign) const {
    index.resize(layout.size());
    sign.resize(layout.size());
    const auto& poly = mesh_->cell(c);
    for (int i = 0; i < layout.size(); ++i) {
      const DofDescriptor& dof = layout.dofs[static_cast<std::size_t>(i)];
      if (const auto* vd = std::get_if<VertexDerivativeDof>(&dof)) {
        index[i] = vertex_dof(poly[static_cast<std::size_t>(vd->vertex)], vd->nu);
        sign[i] = 1.0;
      } else if (const auto* em = std::get_if<EdgeMomentDof>(&dof)) {
        const int e = mesh_->cell_edge(c, em->edge);
        index[i] = edge_dof(e, em->j, em->moment);
        const int dir = mesh_->cell_edge_direction(c, em->edge);
        sign[i] = (dir == 1 || (em->j + em->moment) % 2 == 0) ? 1.0 : -1.0;
      } else {
        const auto& cm = std::get<CellMomentDof>(dof);
        index[i] = cell_dof(c, position_of(cm.nu));
        sign[i] = 1.0;
      }
    }
  }

  const SpaceParams& params() const { return params_; }

 private:
  const Mesh* mesh_;
  SpaceParams params_;
  int per_vertex_ = 0, per_edge_ = 0, per_cell_ = 0;
  int vertex_total_ = 0, edge_total_ = 0, total_ = 0;
};

struct AssembledProblem {
  const Mesh* mesh = nullptr;
  SpaceParams params;
  GlobalDofMap dofs;
  std::vector<ElementOperators> ops;
  std::vector<Eigen::VectorXi> cell_index;
  std::vector<Eigen::VectorXd> cell_sign;
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;
  double assemble_seconds = 0.0;
};

inline AssembledProblem assemble(const Mesh& mesh, const SpaceParams& params,
                                 const std::function<double(const Vec2&)>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  AssembledProblem p{&mesh, params, GlobalDofMap(mesh, params), {}, {}, {}, {}, {}, 0.0};
  p.ops.reserve(static_cast<std::size_t>(mesh.n_cells()));
  p.cell_index.resize(static_cast<std::size_t>(mesh.n_cells()));
  p.cell_sign.resize(static_cast<std::size_t>(mesh.n_cells()));

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p.dofs.size());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    p.ops.emplace_back(mesh, c, params);
    const ElementOperators& ops = p.ops.back();
    Eigen::VectorXi& idx = p.cell_index[static_cast<std::size_t>(c)];
    Eigen::VectorXd& sgn = p.cell_sign[static_cast<std::size_t>(c)];
    p.dofs.cell_map(c, ops.layout(), idx, sgn);
    const Eigen::MatrixXd k_loc = local_stiffness(ops);
    const Eigen::VectorXd b_loc = local_load(ops, f);
    for (int i = 0; i < k_loc.rows(); ++i) {
      b[idx[i]] += sgn[i] * b_loc[i];
      for (int j = 0; j < k_loc.cols(); ++j)
        triplets.emplace_back(idx[i], idx[j], sgn[i] * sgn[j] * k_loc(i, j));
    }
  }
  p.stiffness.resize(p.dofs.size(), p.dofs.size());
  p.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  p.load = std::move(b);
  p.assemble_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return p;
}

/// Gather the local (cell-oriented) DOF values from a global vector.
inline Eigen::VectorXd gather_local(const AssembledProblem& p, int c, const Eigen::VectorXd& x) {
  const Eigen::VectorXi& idx = p.cell_index[static_cast<std::size_t>(c)];
  const Eigen::VectorXd& sgn = p.cell_sign[static_cast<std::size_t>(c)];
  Eigen::VectorXd out(idx.size());
  for (int i = 0; i < idx.size(); ++i) out[i] = sgn[i] * x[idx[i]];
  return out;
}

/// Global DOF vector of a smooth function (vertex data, oriented edge
/// moments, cell moments). Used for boundary data and patch comparisons.
inline Eigen::VectorXd interpolate_dofs(const Mesh& mesh, const GlobalDofMap& map,
                                        const DerivativeOracle& u) {
  const SpaceParams& s = map.params();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(map.size());
  for (int v = 0; v < mesh.n_vertices(); ++v)
    for (const MultiIndex& nu : multi_indices_upto(s.p2 - 1))
      x[map.vertex_dof(v, nu)] = std::pow(mesh.vertex_length(v), nu.order()) *
                                 u.derivative(nu.nu1, nu.nu2, mesh.vertex(v));
  const int quad_degree = 2 * s.r + 2;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& edge = mesh.edge(e);
    const EdgeFrame frame = EdgeFrame::between(mesh.vertex(edge.v0), mesh.vertex(edge.v1));
    const QuadratureRule rule = edge_rule(frame, quad_degree);
    for (int j = 0; j <= s.p2 - 1; ++j)
      for (int m = 0; m < edge_moment_count(j, s); ++m) {
        double sum = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
          const Vec2 xq(rule.points(q, 0), rule.points(q, 1));
          const double sref = 2.0 * (xq - frame.midpoint).dot(frame.tangent) / frame.length;
          sum += rule.weights[q] * legendre_values(m, sref)[m] *
                 normal_derivative(u, frame.normal, j, xq);
        }
        x[map.edge_dof(e, j, m)] = std::pow(frame.length, -1 + j) * sum;
      }
  }
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry& g = mesh.geometry(c);
    const QuadratureRule rule = cell_rule(mesh, c, quad_degree);
    const ScaledMonomialBasis basis{g.centroid, g.diameter, s.r - 2 * s.p1};
    if (basis.degree < 0) continue;
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 xq(rule.points(q, 0), rule.points(q, 1));
      moments.noalias() += rule.weights[q] * u.value(xq) * basis.values_at(xq);
    }
    for (int a = 0; a < moments.size(); ++a)
      x[map.cell_dof(c, a)] = moments[a] / (g.diameter * g.diameter);
  }
  return x;
}

struct ConstrainedSystem {
  Eigen::SparseMatrix<double> basis;    // maps free coordinates to full DOFs
  Eigen::VectorXd particular;           // fixed (boundary) part of the solution
  Eigen::SparseMatrix<double> reduced;  // basis^T K basis
  Eigen::VectorXd reduced_load;
  int n_rows_raw = 0;
  int n_rows_independent = 0;
};

/// Clamp d_n^j u for j < p1 on the boundary: every determining datum of those
/// traces is constrained -- the frame combinations d_t^l d_n^j at the edge
/// endpoints and the edge moments of order j < p1. Corner vertices collect
/// rows from both incident frames; a rank-revealing SVD per vertex removes
/// the redundancy. Passing an exact solution interpolates inhomogeneous data.
inline ConstrainedSystem apply_clamped_bcs(const AssembledProblem& p,
                                           const DerivativeOracle* exact = nullptr) {
  const Mesh& mesh = *p.mesh;
  const SpaceParams& s = p.params;
  const int q1 = s.vertex_dofs();

  std::vector<std::vector<std::pair<Eigen::RowVectorXd, double>>> vertex_rows(
      static_cast<std::size_t>(mesh.n_vertices()));
  std::vector<std::pair<int, double>> fixed_edge_dofs;
  int raw_rows = 0;

  const int quad_degree = 2 * s.r + 2;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& edge = mesh.edge(e);
    if (!edge.boundary()) continue;
    const EdgeFrame frame = EdgeFrame::between(mesh.vertex(edge.v0), mesh.vertex(edge.v1));
    for (int j = 0; j <= s.p1 - 1; ++j) {
      for (int m = 0; m < edge_moment_count(j, s); ++m) {
        double value = 0.0;
        if (exact) {
          const QuadratureRule rule = edge_rule(frame, quad_degree);
          double sum = 0.0;
          for (int q = 0; q < rule.size(); ++q) {
            const Vec2 xq(rule.points(q, 0), rule.points(q, 1));
            const double sref = 2.0 * (xq - frame.midpoint).dot(frame.tangent) / frame.length;
            sum += rule.weights[q] * legendre_values(m, sref)[m] *
                   normal_derivative(*exact, frame.normal, j, xq);
          }
          value = std::pow(frame.length, -1 + j) * sum;
        }
        fixed_edge_dofs.emplace_back(p.dofs.edge_dof(e, j, m), value);
        ++raw_rows;
      }
      for (int v : {edge.v0, edge.v1}) {
        const double hv = mesh.vertex_length(v);
        for (int l = 0; l <= s.p2 - 1 - j; ++l) {
          Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(q1);
          const auto w = frame_derivative_weights(frame.tangent, l, frame.normal, j);
          for (int nu1 = 0; nu1 <= l + j; ++nu1)
            row[position_of(MultiIndex{nu1, l + j - nu1})] =
                w[static_cast<std::size_t>(nu1)] * std::pow(hv, -(l + j));
          double value = 0.0;
          if (exact) {
            Eigen::VectorXd cart(basis_count(s.p2 - 1));
            for (int k = 0; k < cart.size(); ++k) {
              const MultiIndex nu = multi_index_at(k);
              cart[k] = exact->derivative(nu.nu1, nu.nu2, mesh.vertex(v));
            }
            value = frame_derivative(cart, frame.normal, frame.tangent, j, l);
          }
          vertex_rows[static_cast<std::size_t>(v)].emplace_back(std::move(row), value);
          ++raw_rows;
        }
      }
    }
  }

  ConstrainedSystem out;
  out.n_rows_raw = raw_rows;
  out.particular = Eigen::VectorXd::Zero(p.dofs.size());
  std::vector<Eigen::Triplet<double>> basis_triplets;
  int n_free = 0;
  int independent = 0;

  std::vector<bool> edge_dof_fixed(static_cast<std::size_t>(p.dofs.size()), false);
  for (const auto& [dof, value] : fixed_edge_dofs) {
    edge_dof_fixed[static_cast<std::size_t>(dof)] = true;
    out.particular[dof] = value;
    ++independent;
  }

  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const auto& rows = vertex_rows[static_cast<std::size_t>(v)];
    const int base = p.dofs.vertex_dof(v, MultiIndex{0, 0});
    if (rows.empty()) {
      for (int i = 0; i < q1; ++i)
        basis_triplets.emplace_back(base + i, n_free++, 1.0);
      continue;
    }
    Eigen::MatrixXd c(static_cast<int>(rows.size()), q1);
    Eigen::VectorXd g(static_cast<int>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      c.row(static_cast<int>(k)) = rows[k].first;
      g[static_cast<int>(k)] = rows[k].second;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const double tol = 1e-10 * svd.singularValues()[0];
    int rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()[rank] > tol) ++rank;
    independent += rank;
    Eigen::VectorXd xv = Eigen::VectorXd::Zero(q1);
    for (int k = 0; k < rank; ++k)
      xv += (svd.matrixU().col(k).dot(g) / svd.singularValues()[k]) * svd.matrixV().col(k);
    if ((c * xv - g).norm() > 1e-8 * (1.0 + g.norm()))
      throw NumericalError("apply_clamped_bcs: inconsistent boundary data at vertex " +
                           std::to_string(v));
    out.particular.segment(base, q1) = xv;
    for (int k = rank; k < q1; ++k) {
      for (int i = 0; i < q1; ++i) {
        const double entry = svd.matrixV()(i, k);
        if (entry != 0.0) basis_triplets.emplace_back(base + i, n_free, entry);
      }
      ++n_free;
    }
  }
  for (int e = 0; e < mesh.n_edges(); ++e)
    for (int j = 0; j <= p.params.p2 - 1; ++j)
      for (int m = 0; m < edge_moment_count(j, p.params); ++m) {
        const int dof = p.dofs.edge_dof(e, j, m);
        if (!edge_dof_fixed[static_cast<std::size_t>(dof)])
          basis_triplets.emplace_back(dof, n_free++, 1.0);
      }
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int a = 0; a < cell_moment_count(p.params); ++a)
      basis_triplets.emplace_back(p.dofs.cell_dof(c, a), n_free++, 1.0);

  out.n_rows_independent = independent;
  out.basis.resize(p.dofs.size(), n_free);
  out.basis.setFromTriplets(basis_triplets.begin(), basis_triplets.end());
  out.reduced = Eigen::SparseMatrix<double>(out.basis.transpose() * p.stiffness * out.basis);
  out.reduced_load = out.basis.transpose() * (p.load - p.stiffness * out.particular);
  return out;
}

struct SolveResult {
  Eigen::VectorXd solution;  // full DOF vector
  double relative_residual = 0.0;
  double solve_seconds = 0.0;
};

inline SolveResult solve(const ConstrainedSystem& sys) {
  const auto t0 = std::chrono::steady_clock::now();
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.reduced);
  if (llt.info() != Eigen::Success)
    throw NumericalError("solve: reduced stiffness matrix is not positive definite");
  SolveResult out;
  const Eigen::VectorXd y = llt.solve(sys.reduced_load);
  out.solution = sys.basis * y + sys.particular;
  const double scale = std::max(sys.reduced_load.norm(), 1e-300);
  out.relative_residual = (sys.reduced * y - sys.reduced_load).norm() / scale;
  out.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

struct ErrorReport {
  double energy_error = 0.0;       // broken p1-form norm of u - Pi u_h
  double hp1_seminorm_error = 0.0; // sum over |nu| = p1 of ||D^nu (u - Pi u_h)||
  double l2_error = 0.0;
  double exact_energy = 0.0;       // same norm of u, for relative reporting
  double h = 0.0;
  int n_dofs = 0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
  double residual = 0.0;
};

inline ErrorReport error_norms(const AssembledProblem& p, const Eigen::VectorXd& x,
                               const DerivativeOracle& u) {
  ErrorReport rep;
  rep.h = p.mesh->mesh_size();
  rep.n_dofs = p.dofs.size();
  const int p1 = p.params.p1;
  double energy2 = 0.0, l22 = 0.0, hp12 = 0.0, exact2 = 0.0;

  for (int c = 0; c < p.mesh->n_cells(); ++c) {
    const ElementOperators& ops = p.ops[static_cast<std::size_t>(c)];
    const Eigen::VectorXd x_loc = gather_local(p, c, x);
    const PolyCoeffs pi(ops.basis(), ops.pi_star() * x_loc);
    std::vector<PolyCoeffs> pi_dnu;
    pi_dnu.reserve(static_cast<std::size_t>(p1 + 1));
    for (int i = 0; i <= p1; ++i) pi_dnu.push_back(pi.differentiate(MultiIndex{i, p1 - i}));

    const QuadratureRule& rule = ops.cell_quadrature();
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 xq(rule.points(q, 0), rule.points(q, 1));
      const double w = rule.weights[q];
      for (int i = 0; i <= p1; ++i) {
        const double weight = binomial(p1, i);
        const double du = u.derivative(i, p1 - i, xq);
        const double diff = du - pi_dnu[static_cast<std::size_t>(i)].evaluate(xq);
        energy2 += w * weight * diff * diff;
        exact2 += w * weight * du * du;
        hp12 += w * diff * diff;
      }
      const double dv = u.value(xq) - pi.evaluate(xq);
      l22 += w * dv * dv;
    }
  }
  rep.energy_error = std::sqrt(std::max(0.0, energy2));
  rep.l2_error = std::sqrt(std::max(0.0, l22));
  rep.hp1_seminorm_error = std::sqrt(std::max(0.0, hp12));
  rep.exact_energy = std::sqrt(std::max(0.0, exact2));
  return rep;
}

}  // namespace polyvem

#endif
