#ifndef DYON_DYNAMICS_HPP
#define DYON_DYNAMICS_HPP

#include <functional>
#include <utility>

#include "dyon/action.hpp"
#include "dyon/event.hpp"
#include "dyon/field_state.hpp"
#include "dyon/minkowski.hpp"
#include "dyon/potentials.hpp"
#include "dyon/tensor_algebra.hpp"

namespace dyon {

/// Relativistic particle carrying electric and magnetic charge (Gaussian,
/// commensurate units). The four-velocity u = (gamma c, gamma v) keeps
/// u.u = c^2 by construction: the time component is derived from the spatial
/// part whenever the state is advanced.
struct DyonState {
  double m0 = 1.0;
  double qe = 0.0;
  double qm = 0.0;
  Vec3 x;
  FourVector u{1.0, 0.0, 0.0, 0.0};

  static DyonState make(double m0, double qe, double qm, const Vec3& x0, const Vec3& v0,
                        double light_speed = 1.0);

  Vec3 velocity(double light_speed = 1.0) const {
    const double gamma = u[0] / light_speed;
    return u.spatial() / gamma;
  }
  double gamma(double light_speed = 1.0) const { return u[0] / light_speed; }
  double kinetic_energy(double light_speed = 1.0) const {
    return (gamma(light_speed) - 1.0) * m0 * light_speed * light_speed;
  }
  Vec3 momentum() const { return m0 * u.spatial(); }
};

/// Symmetrized three-force
///   F = q_e (E + v/c x B) + q_m (B - v/c x E).
Vec3 lorentz_force_3(const DyonState& d, const FieldState& f, double light_speed = 1.0);

/// Covariant force F_k = (1/c) [q_e F_{kl} u^l + q_m G_{kl} u^l];
/// spatial part is -gamma * (three-force), F_0 = (gamma/c) F.v.
FourVector lorentz_force_covariant(const DyonState& d, const FieldState& f,
                                   double light_speed = 1.0);

/// One step of the dual-Boris integrator. The substitution
///   E_eff = (q_e E + q_m B)/m0,  B_eff = (q_e B - q_m E)/m0
/// makes the symmetrized force structurally the ordinary Lorentz force:
/// half acceleration, exact rotation, half acceleration, then drift.
/// The rotation preserves |u| for E_eff = 0 and is unconditionally stable.
DyonState push_dyon(const DyonState& d, const std::function<FieldState(const Event&)>& field_at,
                    double dt, double t = 0.0, double light_speed = 1.0);

/// Mixed-index electromagnetic stress-energy tensor T^i_k; traceless, and the
/// fully raised view is symmetric.
struct StressEnergy {
  Mat4 t_mixed;

  double trace() const {
    return t_mixed[0][0] + t_mixed[1][1] + t_mixed[2][2] + t_mixed[3][3];
  }
  /// T^{ik} = T^i_j g^{jk}.
  Mat4 raised() const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) r[i][k] = t_mixed[i][k] * Metric::diag(k);
    return r;
  }
  double energy_density() const { return t_mixed[0][0]; }
};

/// T^i_k = (1/4pi) [F^{li} F_{kl} + (1/4) delta^i_k F^{pq} F_{pq}].
StressEnergy stress_energy(const FieldState& f);

/// Self-dual form T^i_k = (1/8pi) [F^{li} F_{kl} + G^{li} G_{kl}];
/// agrees entrywise with stress_energy and is invariant under (E,B)->(B,-E).
StressEnergy stress_energy_symmetrized(const FieldState& f);

/// Both sides of the momentum-balance law at a point:
///   (-d_i T^i_k by central differences, (1/c) [F_{kl} j^l + G_{kl} k^l]).
/// For fields produced by the sources the two agree to second order in the
/// difference step.
std::pair<FourVector, FourVector> force_density_check(const PotentialPair& p,
                                                      const SourceField& s, const Event& e);

}  // namespace dyon

#endif
