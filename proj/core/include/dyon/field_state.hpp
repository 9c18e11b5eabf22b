#ifndef DYON_FIELD_STATE_HPP
#define DYON_FIELD_STATE_HPP

#include <utility>

#include "dyon/tensor_algebra.hpp"
#include "dyon/vec3.hpp"

namespace dyon {

/// Electromagnetic field at a point, stored as the (E, B) pair in Gaussian
/// units (E and B commensurate). The antisymmetric tensor views are computed
/// on demand so antisymmetry holds by construction.
struct FieldState {
  Vec3 E;
  Vec3 B;

  friend constexpr bool operator==(const FieldState&, const FieldState&) = default;

  /// F^{ik}: row 0 is (0, -E), spatial block carries -eps_{abc} B_c.
  Mat4 f_upper() const {
    Mat4 f;
    f[0] = {0.0, -E.x, -E.y, -E.z};
    f[1] = {E.x, 0.0, -B.z, B.y};
    f[2] = {E.y, B.z, 0.0, -B.x};
    f[3] = {E.z, -B.y, B.x, 0.0};
    return f;
  }

  /// F_{ik}: equals F^{ik} with E -> -E.
  Mat4 f_lower() const { return FieldState{-E, B}.f_upper(); }

  /// G^{ik} = (1/2) eps^{ikpq} F_{pq}: the F^{ik} layout with E -> B, B -> -E.
  Mat4 g_upper() const { return dual().f_upper(); }

  /// G_{ik}: equals G^{ik} with B -> -B, i.e. the dual's lower view.
  Mat4 g_lower() const { return dual().f_lower(); }

  /// The (E, B) pair whose f-views are the g-views of this field.
  constexpr FieldState dual() const { return {B, -E}; }

  constexpr FieldState operator-() const { return {-E, -B}; }
  friend constexpr FieldState operator+(const FieldState& a, const FieldState& b) {
    return {a.E + b.E, a.B + b.B};
  }
  friend constexpr FieldState operator-(const FieldState& a, const FieldState& b) {
    return {a.E - b.E, a.B - b.B};
  }
  friend constexpr FieldState operator*(double s, const FieldState& f) {
    return {s * f.E, s * f.B};
  }
};

/// Hodge dual F -> G, in (E, B) storage the swap (E, B) -> (B, -E).
constexpr FieldState hodge_dual(const FieldState& f) { return f.dual(); }

struct InvariantScalars {
  double ff;  ///< F^{pq} F_{pq} = 2 (B^2 - E^2)
  double gg;  ///< G^{pq} G_{pq} = -F^{pq} F_{pq}
};

/// The quadratic invariants (F.F, G.G); always negatives of each other.
constexpr InvariantScalars invariant_scalars(const FieldState& f) {
  const double e2 = dot(f.E, f.E);
  const double b2 = dot(f.B, f.B);
  return {2.0 * (b2 - e2), 2.0 * (e2 - b2)};
}

/// Mixed-index product M^i_k = sum_l A^{li} B_{kl} of two antisymmetric views.
inline Mat4 mixed_product(const Mat4& upper, const Mat4& lower) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int l = 0; l < 4; ++l) s += upper[l][i] * lower[k][l];
      out[i][k] = s;
    }
  return out;
}

/// Both sides of the dual-product identity
///   G^{li} G_{kl} = F^{li} F_{kl} + (1/2) delta^i_k F^{pq} F_{pq},
/// returned as mixed-index arrays (first index up, second down).
inline std::pair<Mat4, Mat4> dual_product_identity(const FieldState& f) {
  const Mat4 lhs = mixed_product(f.g_upper(), f.g_lower());
  Mat4 rhs = mixed_product(f.f_upper(), f.f_lower());
  const double ff = invariant_scalars(f).ff;
  for (int i = 0; i < 4; ++i) rhs[i][i] += 0.5 * ff;
  return {lhs, rhs};
}

}  // namespace dyon

#endif
