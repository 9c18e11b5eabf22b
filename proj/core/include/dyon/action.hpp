#ifndef DYON_ACTION_HPP
#define DYON_ACTION_HPP

#include <functional>
#include <utility>

#include "dyon/event.hpp"
#include "dyon/minkowski.hpp"
#include "dyon/potentials.hpp"

namespace dyon {

/// External source currents: electric j^i = (rho_e c, j_e) and magnetic
/// k^i = (rho_m c, j_m), Gaussian units.
struct SourceField {
  std::function<FourVector(const Event&)> j;
  std::function<FourVector(const Event&)> k;

  static SourceField none() {
    auto zero = [](const Event&) { return FourVector{}; };
    return {zero, zero};
  }
};

/// Spacetime integration box with a midpoint-rule resolution.
struct ActionDomain {
  double t0 = 0.0, t1 = 0.0;
  Vec3 lo, hi;
  int nt = 0, nx = 0, ny = 0, nz = 0;  // >= 4 cells per axis
};

/// Sign convention for the magnetic interaction term. The default carries
/// +k.C against -j.A; the variant flips the k.C term (flipping it only flips
/// the sign convention of the magnetic current in the field equations).
enum class MagneticCoupling { plus_kc, minus_kc };

/// Lagrangian density
///   L = (1/c) k^i C_i - (1/c) j^i A_i - (1/16 pi) F^{ik} F_{ik}
/// with F built from the total two-potential field.
double lagrangian_density(const PotentialPair& p, const SourceField& s, const Event& e,
                          MagneticCoupling coupling = MagneticCoupling::plus_kc);

/// S = (1/c) Integral(L dOmega) by the midpoint rule over the domain box.
double action_value(const PotentialPair& p, const SourceField& s, const ActionDomain& d,
                    MagneticCoupling coupling = MagneticCoupling::plus_kc);

/// Residuals of the symmetrized Maxwell equations at a point:
///   (d_i F^{il} - (4 pi / c) j^l,  d_i G^{il} - (4 pi / c) k^l),
/// derivatives by second-order central differences. Both vanish iff the
/// field equations hold there.
std::pair<FourVector, FourVector> euler_lagrange_residuals(const PotentialPair& p,
                                                           const SourceField& s,
                                                           const Event& e);

/// (d_l j^l, d_l k^l); zero for conserved currents.
std::pair<double, double> continuity_residuals(const SourceField& s, const Event& e,
                                               double light_speed = 1.0, FdScales scales = {});

}  // namespace dyon

#endif
