// Exact calculus on bivariate polynomials expressed in a scaled monomial
// basis m_nu(x) = ((x - center)/scale)^nu attached to a mesh element.

#ifndef POLYVEM_POLYNOMIAL_HPP
#define POLYVEM_POLYNOMIAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "polyvem/multi_index.hpp"

namespace polyvem {

using Vec2 = Eigen::Vector2d;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input/configuration problems (bad mesh file, invalid parameters, ...).
struct ConfigError : Error {
  using Error::Error;
};

/// Numerical breakdowns that indicate a bug or an unsolvable system.
struct NumericalError : Error {
  using Error::Error;
};

struct ScaledMonomialBasis {
  Vec2 center = Vec2::Zero();
  double scale = 1.0;
  int degree = -1;  // degree < 0 denotes the empty basis

  int size() const { return basis_count(degree); }

  bool same_frame(const ScaledMonomialBasis& other) const {
    return center == other.center && scale == other.scale;
  }

  /// Values of all basis monomials at x, in enumeration order.
  Eigen::VectorXd values_at(const Vec2& x) const {
    const int n = size();
    Eigen::VectorXd out(n);
    if (n == 0) return out;
    const double xi = (x.x() - center.x()) / scale;
    const double eta = (x.y() - center.y()) / scale;
    Eigen::VectorXd px(degree + 1), py(degree + 1);
    px[0] = py[0] = 1.0;
    for (int i = 1; i <= degree; ++i) {
      px[i] = px[i - 1] * xi;
      py[i] = py[i - 1] * eta;
    }
    int k = 0;
    for (int d = 0; d <= degree; ++d)
      for (int i = 0; i <= d; ++i) out[k++] = px[i] * py[d - i];
    return out;
  }
};

/// A polynomial as a dense coefficient vector over a ScaledMonomialBasis.
class PolyCoeffs {
 public:
  PolyCoeffs() = default;

  PolyCoeffs(ScaledMonomialBasis basis, Eigen::VectorXd coeffs)
      : basis_(basis), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_.size())
      throw Error("PolyCoeffs: coefficient count does not match basis size");
  }

  static PolyCoeffs zero(const ScaledMonomialBasis& basis) {
    ScaledMonomialBasis b = basis;
    return PolyCoeffs(b, Eigen::VectorXd::Zero(b.size()));
  }

  /// The single monomial m_nu (unit coefficient) as a degree-|nu| polynomial.
  static PolyCoeffs monomial(const ScaledMonomialBasis& frame, const MultiIndex& nu) {
    ScaledMonomialBasis b{frame.center, frame.scale, nu.order()};
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b.size());
    c[position_of(nu)] = 1.0;
    return PolyCoeffs(b, std::move(c));
  }

  const ScaledMonomialBasis& basis() const { return basis_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int degree() const { return basis_.degree; }

  double evaluate(const Vec2& x) const {
    if (coeffs_.size() == 0) return 0.0;
    return basis_.values_at(x).dot(coeffs_);
  }

  PolyCoeffs derivative_x() const { return first_derivative(0); }
  PolyCoeffs derivative_y() const { return first_derivative(1); }

  /// Exact partial derivative D^nu; the basis scale contributes scale^{-|nu|}.
  PolyCoeffs differentiate(const MultiIndex& nu) const {
    PolyCoeffs p = *this;
    for (int i = 0; i < nu.nu1; ++i) p = p.derivative_x();
    for (int i = 0; i < nu.nu2; ++i) p = p.derivative_y();
    return p;
  }

  PolyCoeffs laplacian() const {
    PolyCoeffs dxx = derivative_x().derivative_x();
    PolyCoeffs dyy = derivative_y().derivative_y();
    return dxx + dyy;
  }

  PolyCoeffs laplacian_power(int m) const {
    PolyCoeffs p = *this;
    for (int i = 0; i < m; ++i) p = p.laplacian();
    return p;
  }

  PolyCoeffs operator+(const PolyCoeffs& other) const {
    if (!basis_.same_frame(other.basis_))
      throw Error("PolyCoeffs: cannot add polynomials in different frames");
    const PolyCoeffs& hi = degree() >= other.degree() ? *this : other;
    const PolyCoeffs& lo = degree() >= other.degree() ? other : *this;
    Eigen::VectorXd c = hi.coeffs_;
    c.head(lo.coeffs_.size()) += lo.coeffs_;
    return PolyCoeffs(hi.basis_, std::move(c));
  }

  PolyCoeffs operator*(double s) const { return PolyCoeffs(basis_, coeffs_ * s); }

  PolyCoeffs operator-(const PolyCoeffs& other) const { return *this + other * (-1.0); }

  /// Exact product; both factors must live in the same frame.
  PolyCoeffs multiply(const PolyCoeffs& other) const {
    if (!basis_.same_frame(other.basis_))
      throw Error("PolyCoeffs::multiply: incompatible basis frames");
    if (coeffs_.size() == 0 || other.coeffs_.size() == 0) {
      ScaledMonomialBasis b{basis_.center, basis_.scale, -1};
      return PolyCoeffs(b, Eigen::VectorXd());
    }
    ScaledMonomialBasis b{basis_.center, basis_.scale, degree() + other.degree()};
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b.size());
    const auto lhs = multi_indices_upto(degree());
    const auto rhs = multi_indices_upto(other.degree());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const double ci = coeffs_[static_cast<int>(i)];
      if (ci == 0.0) continue;
      for (std::size_t j = 0; j < rhs.size(); ++j) {
        const double cj = other.coeffs_[static_cast<int>(j)];
        if (cj == 0.0) continue;
        MultiIndex sum{lhs[i].nu1 + rhs[j].nu1, lhs[i].nu2 + rhs[j].nu2};
        c[position_of(sum)] += ci * cj;
      }
    }
    return PolyCoeffs(b, std::move(c));
  }

  /// Directional derivative (d . grad) p for a constant direction d.
  PolyCoeffs directional_derivative(const Vec2& d) const {
    return derivative_x() * d.x() + derivative_y() * d.y();
  }

 private:
  PolyCoeffs first_derivative(int axis) const {
    ScaledMonomialBasis b{basis_.center, basis_.scale, degree() - 1};
    if (b.degree < 0) return PolyCoeffs(b, Eigen::VectorXd());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b.size());
    const auto idx = multi_indices_upto(degree());
    const double inv_h = 1.0 / basis_.scale;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      MultiIndex nu = idx[i];
      const int power = axis == 0 ? nu.nu1 : nu.nu2;
      if (power == 0) continue;
      MultiIndex down = axis == 0 ? MultiIndex{nu.nu1 - 1, nu.nu2} : MultiIndex{nu.nu1, nu.nu2 - 1};
      c[position_of(down)] += coeffs_[static_cast<int>(i)] * power * inv_h;
    }
    return PolyCoeffs(b, std::move(c));
  }

  ScaledMonomialBasis basis_;
  Eigen::VectorXd coeffs_;
};

inline PolyCoeffs operator*(double s, const PolyCoeffs& p) { return p * s; }

}  // namespace polyvem

#endif
