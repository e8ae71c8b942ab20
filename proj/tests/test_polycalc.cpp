#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polyvem/polynomial.hpp"

using namespace polyvem;

namespace {

const ScaledMonomialBasis kUnitSquareFrame{Vec2(0.5, 0.5), std::sqrt(2.0), 0};

TEST(MultiIndex, BasisCount) {
  EXPECT_EQ(basis_count(3), 10);
  EXPECT_EQ(basis_count(0), 1);
  EXPECT_EQ(basis_count(-2), 0);
  EXPECT_EQ(basis_count(-1), 0);
}

TEST(MultiIndex, EnumerationRoundTrip) {
  const auto all = multi_indices_upto(6);
  ASSERT_EQ(static_cast<int>(all.size()), basis_count(6));
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(position_of(all[i]), static_cast<int>(i));
    EXPECT_EQ(multi_index_at(static_cast<int>(i)), all[i]);
  }
}

TEST(Differentiate, PowerRule) {
  // m_(2,0) = ((x-c)/h)^2, second x-derivative is the constant 2/h^2.
  const PolyCoeffs p = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{2, 0});
  const PolyCoeffs d = p.differentiate(MultiIndex{2, 0});
  ASSERT_EQ(d.degree(), 0);
  EXPECT_NEAR(d.coeffs()[0], 2.0 / 2.0, 1e-15);  // h^2 = 2
}

TEST(Differentiate, ZeroOrderIsIdentity) {
  const PolyCoeffs p = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{1, 2});
  const PolyCoeffs d = p.differentiate(MultiIndex{0, 0});
  EXPECT_EQ(d.coeffs(), p.coeffs());
}

TEST(Differentiate, BeyondDegreeGivesZero) {
  const PolyCoeffs p = oracle::random_polynomial(kUnitSquareFrame, 2, 5);
  const PolyCoeffs d = p.differentiate(MultiIndex{3, 0});
  EXPECT_EQ(d.coeffs().size(), 0);
  EXPECT_EQ(d.evaluate(Vec2(0.3, 0.9)), 0.0);
}

TEST(LaplacianPower, QuadraticExample) {
  const PolyCoeffs p = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{2, 0}) +
                       PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{0, 2});
  const PolyCoeffs lap = p.laplacian_power(1);
  ASSERT_EQ(lap.degree(), 0);
  EXPECT_NEAR(lap.coeffs()[0], 4.0 / 2.0, 1e-15);
}

TEST(LaplacianPower, OrderZeroIsIdentity) {
  const PolyCoeffs p = oracle::random_polynomial(kUnitSquareFrame, 4, 11);
  EXPECT_EQ(p.laplacian_power(0).coeffs(), p.coeffs());
}

// The squared bubble on the unit square, twice Laplaced, against a fully
// independent symbolic differentiation of the plain-coordinate expansion.
TEST(LaplacianPower, BubbleSquaredMatchesSymbolicOracle) {
  const PolyCoeffs x2 = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{2, 0});
  const PolyCoeffs y2 = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{0, 2});
  const PolyCoeffs one = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{0, 0});
  // x(1-x) = 1/4 - (x-1/2)^2 = 1/4 - h^2/ h^2 ... expressed in the scaled frame
  const PolyCoeffs bx = one * 0.25 - x2 * 2.0;  // ((x-c)/h)^2 h^2 = (x-c)^2 with h^2 = 2
  const PolyCoeffs by = one * 0.25 - y2 * 2.0;
  const PolyCoeffs bubble = bx.multiply(by);
  const PolyCoeffs bubble2 = bubble.multiply(bubble);
  const PolyCoeffs lap2 = bubble2.laplacian_power(2);
  EXPECT_EQ(lap2.degree(), 4);

  const oracle::UPoly ox = oracle::UPoly::term(1, 0, 1.0) * 1.0 + oracle::UPoly::term(2, 0, -1.0);
  const oracle::UPoly oy = oracle::UPoly::term(0, 1, 1.0) * 1.0 + oracle::UPoly::term(0, 2, -1.0);
  const oracle::UPoly obubble2 = ox * oy * ox * oy;
  const oracle::UPoly olap2 = obubble2.laplacian().laplacian();

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const Vec2 p(coord(rng), coord(rng));
    EXPECT_NEAR(lap2.evaluate(p), olap2.eval(p), 1e-10 * (1.0 + std::abs(olap2.eval(p))));
  }
}

TEST(Multiply, OneIsNeutral) {
  const PolyCoeffs one = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{0, 0});
  const PolyCoeffs p = oracle::random_polynomial(kUnitSquareFrame, 3, 21);
  const PolyCoeffs q = one.multiply(p);
  for (int i = 0; i < p.coeffs().size(); ++i) EXPECT_DOUBLE_EQ(q.coeffs()[i], p.coeffs()[i]);
}

TEST(Multiply, MonomialsAddExponents) {
  const PolyCoeffs mx = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{1, 0});
  const PolyCoeffs my = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{0, 1});
  const PolyCoeffs mxy = mx.multiply(my);
  EXPECT_EQ(mxy.degree(), 2);
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(6);
  expect[position_of(MultiIndex{1, 1})] = 1.0;
  EXPECT_EQ(mxy.coeffs(), expect);
}

TEST(Multiply, MismatchedFramesThrow) {
  const PolyCoeffs a = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{1, 0});
  const PolyCoeffs b = PolyCoeffs::monomial(ScaledMonomialBasis{Vec2(0, 0), 1.0, 0}, MultiIndex{1, 0});
  EXPECT_THROW(a.multiply(b), Error);
}

TEST(Multiply, BubbleSquaredLeadingCoefficient) {
  // [x(1-x) y(1-y)]^2 has x^4 y^4 coefficient 1 in plain coordinates.
  const PolyCoeffs one = PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{0, 0});
  const PolyCoeffs bx = one * 0.25 - PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{2, 0}) * 2.0;
  const PolyCoeffs by = one * 0.25 - PolyCoeffs::monomial(kUnitSquareFrame, MultiIndex{0, 2}) * 2.0;
  const PolyCoeffs bubble2 = bx.multiply(by).multiply(bx.multiply(by));
  EXPECT_EQ(bubble2.degree(), 8);
  const oracle::UPoly plain = oracle::to_unscaled(bubble2);
  EXPECT_NEAR(plain.coeff(4, 4), 1.0, 1e-12);
}

// Differentiation commutes with evaluation: central finite differences of the
// evaluated polynomial approximate the exact derivative.
TEST(Properties, DerivativeMatchesFiniteDifferences) {
  const PolyCoeffs p = oracle::random_polynomial(kUnitSquareFrame, 5, 99);
  const PolyCoeffs px = p.derivative_x();
  const PolyCoeffs py = p.derivative_y();
  const double h = 1e-5 * kUnitSquareFrame.scale;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 x(coord(rng), coord(rng));
    const double fdx = (p.evaluate(x + Vec2(h, 0)) - p.evaluate(x - Vec2(h, 0))) / (2 * h);
    const double fdy = (p.evaluate(x + Vec2(0, h)) - p.evaluate(x - Vec2(0, h))) / (2 * h);
    EXPECT_NEAR(px.evaluate(x), fdx, 1e-5 * kUnitSquareFrame.scale);
    EXPECT_NEAR(py.evaluate(x), fdy, 1e-5 * kUnitSquareFrame.scale);
  }
}

TEST(Properties, LaplacianPowerEqualsMultinomialSecondDerivativeSum) {
  // (d_xx + d_yy)^m expands into the weighted pure derivatives D^{(2a, 2b)};
  // the identity underpins reading volume terms off the cell moments.
  const PolyCoeffs p = oracle::random_polynomial(kUnitSquareFrame, 8, 456);
  for (int m : {1, 2, 3}) {
    const PolyCoeffs direct = p.laplacian_power(m);
    PolyCoeffs sum = PolyCoeffs::zero(direct.basis());
    for (int a = 0; a <= m; ++a)
      sum = sum + p.differentiate(MultiIndex{2 * a, 2 * (m - a)}) * binomial(m, a);
    ASSERT_EQ(sum.coeffs().size(), direct.coeffs().size());
    for (int i = 0; i < direct.coeffs().size(); ++i)
      EXPECT_NEAR(sum.coeffs()[i], direct.coeffs()[i],
                  1e-12 * std::max(1.0, std::abs(direct.coeffs()[i])));
  }
}

TEST(Properties, LaplacianPowerComposes) {
  const PolyCoeffs p = oracle::random_polynomial(kUnitSquareFrame, 8, 1234);
  const PolyCoeffs lhs = p.laplacian_power(3);
  const PolyCoeffs rhs = p.laplacian_power(2).laplacian_power(1);
  ASSERT_EQ(lhs.coeffs().size(), rhs.coeffs().size());
  for (int i = 0; i < lhs.coeffs().size(); ++i)
    EXPECT_NEAR(lhs.coeffs()[i], rhs.coeffs()[i], 1e-13 * std::max(1.0, std::abs(rhs.coeffs()[i])));
}

// Conditioning of the scaled basis Gram matrix is reported, not asserted.
TEST(Properties, GramConditionNumberDiagnostic) {
  std::vector<Vec2> square{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  const Mesh mesh = single_cell_mesh(square);
  // direct Gram via the monomial integrals oracle
  const int r = 4;
  const ScaledMonomialBasis frame{mesh.geometry(0).centroid, mesh.geometry(0).diameter, r};
  const auto idx = multi_indices_upto(r);
  Eigen::MatrixXd gram(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const PolyCoeffs pi = PolyCoeffs::monomial(frame, idx[i]);
      const PolyCoeffs pj = PolyCoeffs::monomial(frame, idx[j]);
      const oracle::UPoly prod = oracle::to_unscaled(pi.multiply(pj));
      double v = 0.0;
      for (const auto& [k, c] : prod.c)
        v += c * oracle::polygon_monomial_integral(square, k.first, k.second);
      gram(static_cast<int>(i), static_cast<int>(j)) = v;
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const double cond = svd.singularValues().maxCoeff() / svd.singularValues().minCoeff();
  std::printf("[ INFO     ] degree-%d scaled-basis Gram condition number: %.3e\n", r, cond);
  SUCCEED();
}

}  // namespace
