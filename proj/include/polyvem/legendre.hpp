// Legendre polynomials on [-1,1] and Gauss-Legendre rules. Edge-local
// polynomials are stored in this basis, so we need values, endpoint
// derivatives, and the derivative operator on coefficient vectors.

#ifndef POLYVEM_LEGENDRE_HPP
#define POLYVEM_LEGENDRE_HPP

#include <Eigen/Dense>
#include <cmath>

namespace polyvem {

/// P_0(x) .. P_n(x) via the three-term recurrence.
inline Eigen::VectorXd legendre_values(int n, double x) {
  Eigen::VectorXd p(n + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = x;
  for (int k = 1; k < n; ++k)
    p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1);
  return p;
}

/// ell-th derivative of P_n at +1 or -1 (closed form).
inline double legendre_endpoint_derivative(int n, int ell, int endpoint_sign) {
  if (ell > n) return 0.0;
  double v = 1.0;  // (n+ell)! / (2^ell ell! (n-ell)!)
  for (int i = 0; i < ell; ++i) {
    v *= static_cast<double>(n + ell - i) / 2.0;
    v *= static_cast<double>(n - i);
    v /= static_cast<double>(i + 1);
  }
  // v = prod_{i<ell} (n+ell-i)(n-i) / (2 (i+1)) == (n+ell)!/(2^ell ell! (n-ell)!)
  if (endpoint_sign < 0 && ((n + ell) % 2 != 0)) v = -v;
  return v;
}

/// Matrix mapping Legendre coefficients of p to Legendre coefficients of p'
/// (reference variable on [-1,1]); square of size n+1, last row of p' is 0.
inline Eigen::MatrixXd legendre_derivative_matrix(int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  // P'_k = sum_{j = k-1, k-3, ...} (2j+1) P_j
  for (int k = 1; k <= n; ++k)
    for (int j = k - 1; j >= 0; j -= 2) d(j, k) = 2 * j + 1;
  return d;
}

/// n-point Gauss-Legendre rule on [-1,1]; exact for degree 2n-1.
inline void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      // evaluate P_n and P'_n
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[n - 1 - i] = x;  // ascending order
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace polyvem

#endif
