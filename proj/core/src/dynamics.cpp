#include "dyon/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dyon {

DyonState DyonState::make(double m0, double qe, double qm, const Vec3& x0, const Vec3& v0,
                          double light_speed) {
  if (m0 <= 0.0) throw std::invalid_argument("rest mass must be positive");
  if (dot(v0, v0) >= light_speed * light_speed)
    throw std::invalid_argument("particle speed must stay below c");
  DyonState d;
  d.m0 = m0;
  d.qe = qe;
  d.qm = qm;
  d.x = x0;
  d.u = four_velocity(v0, light_speed);
  return d;
}

Vec3 lorentz_force_3(const DyonState& d, const FieldState& f, double light_speed) {
  const Vec3 beta = d.velocity(light_speed) / light_speed;
  return d.qe * (f.E + cross(beta, f.B)) + d.qm * (f.B - cross(beta, f.E));
}

FourVector lorentz_force_covariant(const DyonState& d, const FieldState& f,
                                   double light_speed) {
  const Mat4 fl = f.f_lower();
  const Mat4 gl = f.g_lower();
  FourVector out;
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int l = 0; l < 4; ++l) s += (d.qe * fl[k][l] + d.qm * gl[k][l]) * d.u[l];
    out[k] = s / light_speed;
  }
  return out;
}

DyonState push_dyon(const DyonState& d, const std::function<FieldState(const Event&)>& field_at,
                    double dt, double t, double light_speed) {
  const double c = light_speed;
  const FieldState f = field_at(Event{t, d.x});

  // Effective fields fold both charges into one Lorentz-force structure.
  const Vec3 e_eff = (d.qe * f.E + d.qm * f.B) / d.m0;
  const Vec3 b_eff = (d.qe * f.B - d.qm * f.E) / d.m0;

  Vec3 w = d.u.spatial();  // gamma * v

  // half acceleration
  w += (0.5 * dt) * e_eff;

  // exact-rotation Boris kick about b_eff
  const double gamma_mid = std::sqrt(1.0 + dot(w, w) / (c * c));
  const Vec3 tv = (0.5 * dt / (gamma_mid * c)) * b_eff;
  const Vec3 sv = (2.0 / (1.0 + dot(tv, tv))) * tv;
  const Vec3 w_prime = w + cross(w, tv);
  w += cross(w_prime, sv);

  // half acceleration
  w += (0.5 * dt) * e_eff;

  DyonState out = d;
  const double gamma_new = std::sqrt(1.0 + dot(w, w) / (c * c));
  out.u = FourVector{gamma_new * c, w};
  out.x = d.x + (dt / gamma_new) * w;
  return out;
}

StressEnergy stress_energy(const FieldState& f) {
  Mat4 t = mixed_product(f.f_upper(), f.f_lower());
  const double ff = invariant_scalars(f).ff;
  for (int i = 0; i < 4; ++i) t[i][i] += 0.25 * ff;
  const double scale = 1.0 / (4.0 * std::numbers::pi);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) t[i][k] *= scale;
  return {t};
}

StressEnergy stress_energy_symmetrized(const FieldState& f) {
  const Mat4 tf = mixed_product(f.f_upper(), f.f_lower());
  const Mat4 tg = mixed_product(f.g_upper(), f.g_lower());
  Mat4 t;
  const double scale = 1.0 / (8.0 * std::numbers::pi);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) t[i][k] = scale * (tf[i][k] + tg[i][k]);
  return {t};
}

std::pair<FourVector, FourVector> force_density_check(const PotentialPair& p,
                                                      const SourceField& s, const Event& e) {
  const double c = p.light_speed();

  FourVector divergence;  // d_i T^i_k
  for (int axis = 0; axis < 4; ++axis) {
    const double h = p.derivative_step(axis, e);
    const Mat4 tp = stress_energy(p.fields_at(shifted(e, axis, h))).t_mixed;
    const Mat4 tm = stress_energy(p.fields_at(shifted(e, axis, -h))).t_mixed;
    double denom = 2.0 * h;
    if (axis == 0) denom *= c;
    for (int k = 0; k < 4; ++k) divergence[k] += (tp[axis][k] - tm[axis][k]) / denom;
  }
  FourVector lhs;
  for (int k = 0; k < 4; ++k) lhs[k] = -divergence[k];

  const FieldState f = p.fields_at(e);
  const Mat4 fl = f.f_lower();
  const Mat4 gl = f.g_lower();
  const FourVector j = s.j(e);
  const FourVector kk = s.k(e);
  FourVector rhs;
  for (int k = 0; k < 4; ++k) {
    double acc = 0.0;
    for (int l = 0; l < 4; ++l) acc += fl[k][l] * j[l] + gl[k][l] * kk[l];
    rhs[k] = acc / c;
  }
  return {lhs, rhs};
}

}  // namespace dyon
