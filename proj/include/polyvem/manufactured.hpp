// Manufactured solutions with exact derivatives of every order:
//   bubble     [x(1-x)y(1-y)]^p1, polynomial, source computed symbolically
//   sin        sin^p1(pi x) sin^p1(pi y), finite trigonometric expansion
//   poly-patch a fixed degree-r polynomial (inhomogeneous boundary data)

#ifndef POLYVEM_MANUFACTURED_HPP
#define POLYVEM_MANUFACTURED_HPP

#include <map>
#include <memory>
#include <string>

#include "polyvem/dof_functionals.hpp"
#include "polyvem/polynomial.hpp"

namespace polyvem {

class ManufacturedSolution : public DerivativeOracle {
 public:
  virtual double source(const Vec2& x) const = 0;  // f = (-Delta)^{p1} u
  virtual std::string name() const = 0;
};

/// Finite sum of separable trigonometric terms c * T(kx pi x) * T(ky pi y)
/// with T in {cos, sin}; closed under differentiation.
class TrigPoly2D {
 public:
  struct Key {
    int kx, ky;
    bool sin_x, sin_y;
    auto operator<=>(const Key&) const = default;
  };

  static TrigPoly2D separable(const std::map<std::pair<int, bool>, double>& fx,
                              const std::map<std::pair<int, bool>, double>& fy) {
    TrigPoly2D out;
    for (const auto& [tx, cx] : fx)
      for (const auto& [ty, cy] : fy)
        out.add(Key{tx.first, ty.first, tx.second, ty.second}, cx * cy);
    return out;
  }

  /// 1D expansion of sin^m(pi t) as a map (frequency, is_sin) -> coefficient.
  static std::map<std::pair<int, bool>, double> sin_power(int m) {
    std::map<std::pair<int, bool>, double> acc{{{1, true}, 1.0}};
    for (int i = 1; i < m; ++i) {
      std::map<std::pair<int, bool>, double> next;
      auto add = [&next](int k, bool is_sin, double c) {
        if (c == 0.0) return;
        if (k < 0) {
          k = -k;
          if (is_sin) c = -c;
        }
        if (k == 0 && is_sin) return;
        next[{k, is_sin}] += c;
      };
      for (const auto& [t, c] : acc) {
        const int k = t.first;
        // multiply by sin(pi t): product-to-sum
        if (t.second) {  // sin(k) sin(1) = [cos(k-1) - cos(k+1)] / 2
          add(k - 1, false, 0.5 * c);
          add(k + 1, false, -0.5 * c);
        } else {  // cos(k) sin(1) = [sin(k+1) - sin(k-1)] / 2
          add(k + 1, true, 0.5 * c);
          add(k - 1, true, -0.5 * c);
        }
      }
      acc = std::move(next);
    }
    return acc;
  }

  TrigPoly2D dx() const {
    TrigPoly2D out;
    for (const auto& [t, c] : terms_) {
      if (t.kx == 0 && !t.sin_x) continue;
      // d/dx cos(k pi x) = -k pi sin(k pi x);  d/dx sin = k pi cos
      out.add(Key{t.kx, t.ky, !t.sin_x, t.sin_y}, c * M_PI * (t.sin_x ? t.kx : -t.kx));
    }
    return out;
  }

  TrigPoly2D dy() const {
    TrigPoly2D out;
    for (const auto& [t, c] : terms_) {
      if (t.ky == 0 && !t.sin_y) continue;
      out.add(Key{t.kx, t.ky, t.sin_x, !t.sin_y}, c * M_PI * (t.sin_y ? t.ky : -t.ky));
    }
    return out;
  }

  TrigPoly2D laplacian() const {
    TrigPoly2D out = dx().dx();
    for (const auto& [t, c] : dy().dy().terms_) out.add(t, c);
    return out;
  }

  double evaluate(const Vec2& p) const {
    double sum = 0.0;
    for (const auto& [t, c] : terms_) {
      const double fx = t.sin_x ? std::sin(t.kx * M_PI * p.x()) : std::cos(t.kx * M_PI * p.x());
      const double fy = t.sin_y ? std::sin(t.ky * M_PI * p.y()) : std::cos(t.ky * M_PI * p.y());
      sum += c * fx * fy;
    }
    return sum;
  }

 private:
  void add(const Key& k, double c) {
    if (c == 0.0) return;
    terms_[k] += c;
  }

  std::map<Key, double> terms_;
};

/// sin^p1(pi x) sin^p1(pi y): clamped to order p1 on the unit square.
class SinSolution final : public ManufacturedSolution {
 public:
  explicit SinSolution(int p1) : p1_(p1) {
    const auto s = TrigPoly2D::sin_power(p1);
    base_ = TrigPoly2D::separable(s, s);
    f_ = base_;
    for (int i = 0; i < p1; ++i) f_ = f_.laplacian();
    sign_f_ = (p1 % 2 == 0) ? 1.0 : -1.0;
  }

  double derivative(int dx, int dy, const Vec2& x) const override {
    auto it = cache_.find({dx, dy});
    if (it == cache_.end()) {
      TrigPoly2D d = base_;
      for (int i = 0; i < dx; ++i) d = d.dx();
      for (int i = 0; i < dy; ++i) d = d.dy();
      it = cache_.emplace(std::make_pair(dx, dy), std::move(d)).first;
    }
    return it->second.evaluate(x);
  }

  double source(const Vec2& x) const override { return sign_f_ * f_.evaluate(x); }
  std::string name() const override { return "sin"; }

  /// Derivatives are memoized; warm the cache before any concurrent use.
  void precompute(int max_order) const {
    for (int d = 0; d <= max_order; ++d)
      for (int i = 0; i <= d; ++i) derivative(i, d - i, Vec2(0.5, 0.5));
  }

 private:
  int p1_;
  TrigPoly2D base_, f_;
  double sign_f_ = 1.0;
  mutable std::map<std::pair<int, int>, TrigPoly2D> cache_;
};

/// Polynomial solution; derivatives and the source are exact coefficients.
class PolySolution final : public ManufacturedSolution {
 public:
  PolySolution(std::string name, PolyCoeffs u, int p1) : name_(std::move(name)), u_(std::move(u)) {
    f_ = u_.laplacian_power(p1) * ((p1 % 2 == 0) ? 1.0 : -1.0);
  }

  double derivative(int dx, int dy, const Vec2& x) const override {
    auto it = cache_.find({dx, dy});
    if (it == cache_.end())
      it = cache_.emplace(std::make_pair(dx, dy), u_.differentiate(MultiIndex{dx, dy})).first;
    return it->second.evaluate(x);
  }

  double source(const Vec2& x) const override { return f_.evaluate(x); }
  std::string name() const override { return name_; }

  const PolyCoeffs& u() const { return u_; }
  const PolyCoeffs& f() const { return f_; }

  void precompute(int max_order) const {
    for (int d = 0; d <= max_order; ++d)
      for (int i = 0; i <= d; ++i) derivative(i, d - i, Vec2(0.5, 0.5));
  }

 private:
  std::string name_;
  PolyCoeffs u_;
  PolyCoeffs f_;
  mutable std::map<std::pair<int, int>, PolyCoeffs> cache_;
};

/// [x(1-x) y(1-y)]^p1, built symbolically in a unit frame.
inline std::unique_ptr<PolySolution> make_bubble_solution(int p1) {
  const ScaledMonomialBasis frame{Vec2(0.5, 0.5), 1.0, 0};
  // x(1-x) = 1/4 - (x - 1/2)^2
  PolyCoeffs bx = PolyCoeffs::monomial(frame, MultiIndex{0, 0}) * 0.25 -
                  PolyCoeffs::monomial(frame, MultiIndex{2, 0});
  PolyCoeffs by = PolyCoeffs::monomial(frame, MultiIndex{0, 0}) * 0.25 -
                  PolyCoeffs::monomial(frame, MultiIndex{0, 2});
  PolyCoeffs u = bx.multiply(by);
  PolyCoeffs result = u;
  for (int i = 1; i < p1; ++i) result = result.multiply(u);
  return std::make_unique<PolySolution>("bubble", result, p1);
}

/// Fixed degree-r polynomial with O(1) coefficients (hash-derived, stable).
inline std::unique_ptr<PolySolution> make_poly_patch_solution(int r, int p1) {
  const ScaledMonomialBasis basis{Vec2(0.5, 0.5), 1.0, r};
  Eigen::VectorXd c(basis.size());
  for (int i = 0; i < c.size(); ++i) {
    const std::uint64_t hash = (static_cast<std::uint64_t>(i) + 7) * 2654435761ULL % 1000ULL;
    c[i] = static_cast<double>(hash) / 500.0 - 1.0;
  }
  return std::make_unique<PolySolution>("poly-patch", PolyCoeffs(basis, c), p1);
}

inline std::unique_ptr<ManufacturedSolution> make_solution(const std::string& name, int p1, int r) {
  const int order = std::max(p1, r) + 2;
  if (name == "sin") {
    auto s = std::make_unique<SinSolution>(p1);
    s->precompute(order);
    return s;
  }
  if (name == "bubble") {
    auto s = make_bubble_solution(p1);
    s->precompute(order);
    return s;
  }
  if (name == "poly-patch") {
    auto s = make_poly_patch_solution(r, p1);
    s->precompute(order);
    return s;
  }
  throw ConfigError("unknown manufactured solution '" + name + "'");
}

}  // namespace polyvem

#endif
