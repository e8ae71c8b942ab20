// Bivariate multi-indices and the graded-lexicographic enumeration used for
// every polynomial coefficient vector in the library.
//
// The enumeration lists multi-indices by total degree and, within one degree
// block, by ascending first exponent:
//   (0,0), (0,1), (1,0), (0,2), (1,1), (2,0), ...
// so position(nu) = |nu|(|nu|+1)/2 + nu1.

#ifndef POLYVEM_MULTI_INDEX_HPP
#define POLYVEM_MULTI_INDEX_HPP

#include <cassert>
#include <vector>

namespace polyvem {

struct MultiIndex {
  int nu1 = 0;
  int nu2 = 0;

  int order() const { return nu1 + nu2; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Dimension of the polynomial space of total degree <= k (empty for k < 0).
inline int basis_count(int k) { return k >= 0 ? (k + 1) * (k + 2) / 2 : 0; }

/// Position of nu in the graded-lexicographic enumeration.
inline int position_of(const MultiIndex& nu) {
  assert(nu.nu1 >= 0 && nu.nu2 >= 0);
  const int d = nu.order();
  return d * (d + 1) / 2 + nu.nu1;
}

/// Inverse of position_of.
inline MultiIndex multi_index_at(int position) {
  assert(position >= 0);
  int d = 0;
  while (basis_count(d) <= position) ++d;
  const int offset = position - d * (d + 1) / 2;
  return MultiIndex{offset, d - offset};
}

/// All multi-indices with |nu| <= k in enumeration order.
inline std::vector<MultiIndex> multi_indices_upto(int k) {
  std::vector<MultiIndex> out;
  if (k < 0) return out;
  out.reserve(static_cast<std::size_t>(basis_count(k)));
  for (int d = 0; d <= k; ++d)
    for (int i = 0; i <= d; ++i) out.push_back(MultiIndex{i, d - i});
  return out;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return v;
}

}  // namespace polyvem

#endif
