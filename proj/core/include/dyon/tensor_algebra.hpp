#ifndef DYON_TENSOR_ALGEBRA_HPP
#define DYON_TENSOR_ALGEBRA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace dyon {

/// 4x4 component array. Index variance is carried by the name of whatever
/// produced it (upper/upper, mixed, lower/lower), never converted silently.
struct Mat4 {
  std::array<std::array<double, 4>, 4> m{};

  constexpr std::array<double, 4>& operator[](int i) { return m[i]; }
  constexpr const std::array<double, 4>& operator[](int i) const { return m[i]; }
  friend constexpr bool operator==(const Mat4&, const Mat4&) = default;
};

inline double max_abs(const Mat4& a) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) r = std::max(r, std::fabs(a[i][k]));
  return r;
}

inline double max_abs_diff(const Mat4& a, const Mat4& b) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) r = std::max(r, std::fabs(a[i][k] - b[i][k]));
  return r;
}

namespace detail {
// Sign of the permutation (i,j,k,l) of {0,1,2,3}, 0 on repeats.
constexpr int permutation_sign4(int i, int j, int k, int l) {
  if (i == j || i == k || i == l || j == k || j == l || k == l) return 0;
  int sign = 1;
  int p[4] = {i, j, k, l};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) {
        const int t = p[a];
        p[a] = p[b];
        p[b] = t;
        sign = -sign;
      }
  return sign;
}
}  // namespace detail

/// Completely antisymmetric unit tensor, epsilon^{0123} = +1.
constexpr int epsilon_upper(int i, int j, int k, int l) {
  return detail::permutation_sign4(i, j, k, l);
}

/// Lower-index version; all four indices lowered flips the sign (det g = -1).
constexpr int epsilon_lower(int i, int j, int k, int l) {
  return -detail::permutation_sign4(i, j, k, l);
}

constexpr int kronecker(int i, int k) { return i == k ? 1 : 0; }

/// delta^{ij}_{pq} = d^i_p d^j_q - d^i_q d^j_p.
constexpr int generalized_delta2(int i, int j, int p, int q) {
  return kronecker(i, p) * kronecker(j, q) - kronecker(i, q) * kronecker(j, p);
}

/// delta^{pqi}_{rsk}: 3x3 determinant of Kronecker symbols.
constexpr int generalized_delta3(int p, int q, int i, int r, int s, int k) {
  return kronecker(p, r) * kronecker(q, s) * kronecker(i, k)
       + kronecker(p, s) * kronecker(q, k) * kronecker(i, r)
       + kronecker(p, k) * kronecker(q, r) * kronecker(i, s)
       - kronecker(p, r) * kronecker(q, k) * kronecker(i, s)
       - kronecker(p, s) * kronecker(q, r) * kronecker(i, k)
       - kronecker(p, k) * kronecker(q, s) * kronecker(i, r);
}

/// Optional precomputed table of epsilon^{ijkl} over all 256 index tuples.
/// The permutation-sign routine above is the source of truth; this is a cache.
class EpsilonTable {
 public:
  EpsilonTable() {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) tab_[idx(i, j, k, l)] = epsilon_upper(i, j, k, l);
  }
  int upper(int i, int j, int k, int l) const { return tab_[idx(i, j, k, l)]; }
  int lower(int i, int j, int k, int l) const { return -tab_[idx(i, j, k, l)]; }

 private:
  static constexpr int idx(int i, int j, int k, int l) { return ((i * 4 + j) * 4 + k) * 4 + l; }
  std::array<int, 256> tab_{};
};

inline const EpsilonTable& epsilon_table() {
  static const EpsilonTable t;
  return t;
}

/// Both sides of epsilon^{ijpq} epsilon_{klpq} = -2 delta^{ij}_{kl},
/// the contracted sum on the left computed by explicit index loops.
constexpr std::pair<int, int> epsilon_contraction_check(int i, int j, int k, int l) {
  int lhs = 0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) lhs += epsilon_upper(i, j, p, q) * epsilon_lower(k, l, p, q);
  return {lhs, -2 * generalized_delta2(i, j, k, l)};
}

/// Companion identity epsilon^{ijpq} delta^{kl}_{pq} = 2 epsilon^{ijkl}.
constexpr std::pair<int, int> epsilon_delta_check(int i, int j, int k, int l) {
  int lhs = 0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) lhs += epsilon_upper(i, j, p, q) * generalized_delta2(k, l, p, q);
  return {lhs, 2 * epsilon_upper(i, j, k, l)};
}

/// Both sides of delta^{pqi}_{rsk} = -epsilon^{pqil} epsilon_{rskl} (sum over l).
constexpr std::pair<int, int> delta3_check(int p, int q, int i, int r, int s, int k) {
  int lhs = 0;
  for (int l = 0; l < 4; ++l) lhs -= epsilon_upper(p, q, i, l) * epsilon_lower(r, s, k, l);
  return {lhs, generalized_delta3(p, q, i, r, s, k)};
}

}  // namespace dyon

#endif
