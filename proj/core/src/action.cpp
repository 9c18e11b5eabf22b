#include "dyon/action.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dyon/numerics.hpp"

namespace dyon {

double lagrangian_density(const PotentialPair& p, const SourceField& s, const Event& e,
                          MagneticCoupling coupling) {
  const double c = p.light_speed();
  const FieldState f = p.fields_at(e);
  const double ff = invariant_scalars(f).ff;
  const double kc = minkowski_dot(s.k(e), p.c_at(e));
  const double ja = minkowski_dot(s.j(e), p.a_at(e));
  const double kc_signed = coupling == MagneticCoupling::plus_kc ? kc : -kc;
  return (kc_signed - ja) / c - ff / (16.0 * std::numbers::pi);
}

double action_value(const PotentialPair& p, const SourceField& s, const ActionDomain& d,
                    MagneticCoupling coupling) {
  if (d.nt < 4 || d.nx < 4 || d.ny < 4 || d.nz < 4)
    throw std::invalid_argument("action domain needs at least 4 cells per axis");
  if (!(d.t1 > d.t0) || !(d.hi.x > d.lo.x) || !(d.hi.y > d.lo.y) || !(d.hi.z > d.lo.z))
    throw std::invalid_argument("action domain extents must be positive");

  const double ht = (d.t1 - d.t0) / d.nt;
  const double hx = (d.hi.x - d.lo.x) / d.nx;
  const double hy = (d.hi.y - d.lo.y) / d.ny;
  const double hz = (d.hi.z - d.lo.z) / d.nz;

  std::vector<double> cells;
  cells.reserve(std::size_t(d.nt) * d.nx * d.ny * d.nz);
  for (int it = 0; it < d.nt; ++it)
    for (int ix = 0; ix < d.nx; ++ix)
      for (int iy = 0; iy < d.ny; ++iy)
        for (int iz = 0; iz < d.nz; ++iz) {
          const Event e{d.t0 + (it + 0.5) * ht,
                        {d.lo.x + (ix + 0.5) * hx, d.lo.y + (iy + 0.5) * hy,
                         d.lo.z + (iz + 0.5) * hz}};
          cells.push_back(lagrangian_density(p, s, e, coupling));
        }
  // dOmega = c dt dV and the overall 1/c cancel.
  return pairwise_sum(cells) * ht * hx * hy * hz;
}

std::pair<FourVector, FourVector> euler_lagrange_residuals(const PotentialPair& p,
                                                           const SourceField& s,
                                                           const Event& e) {
  const double c = p.light_speed();
  FourVector div_f, div_g;
  for (int axis = 0; axis < 4; ++axis) {
    const double h = p.derivative_step(axis, e);
    const FieldState fp = p.fields_at(shifted(e, axis, h));
    const FieldState fm = p.fields_at(shifted(e, axis, -h));
    const Mat4 dfu = fp.f_upper();
    const Mat4 dfm = fm.f_upper();
    const Mat4 dgu = fp.g_upper();
    const Mat4 dgm = fm.g_upper();
    double denom = 2.0 * h;
    if (axis == 0) denom *= c;  // d_0 = (1/c) d/dt
    for (int l = 0; l < 4; ++l) {
      div_f[l] += (dfu[axis][l] - dfm[axis][l]) / denom;
      div_g[l] += (dgu[axis][l] - dgm[axis][l]) / denom;
    }
  }
  const double fourpi_c = 4.0 * std::numbers::pi / c;
  const FourVector j = s.j(e);
  const FourVector k = s.k(e);
  FourVector re, rm;
  for (int l = 0; l < 4; ++l) {
    re[l] = div_f[l] - fourpi_c * j[l];
    rm[l] = div_g[l] - fourpi_c * k[l];
  }
  return {re, rm};
}

std::pair<double, double> continuity_residuals(const SourceField& s, const Event& e,
                                               double light_speed, FdScales scales) {
  double dj = 0.0, dk = 0.0;
  for (int axis = 0; axis < 4; ++axis) {
    const double h = scales.step(axis, e);
    const FourVector jp = s.j(shifted(e, axis, h));
    const FourVector jm = s.j(shifted(e, axis, -h));
    const FourVector kp = s.k(shifted(e, axis, h));
    const FourVector km = s.k(shifted(e, axis, -h));
    double denom = 2.0 * h;
    if (axis == 0) denom *= light_speed;
    dj += (jp[axis] - jm[axis]) / denom;
    dk += (kp[axis] - km[axis]) / denom;
  }
  return {dj, dk};
}

}  // namespace dyon
