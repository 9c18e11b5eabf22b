#ifndef DYON_TESTS_POLY_POTENTIAL_HPP
#define DYON_TESTS_POLY_POTENTIAL_HPP

#include <array>

#include "dyon/potentials.hpp"
#include "support/random_fields.hpp"

namespace dyon::testing {

// Random quadratic four-potential in the coordinates (x^0 = c t, x, y, z),
// with the exact jacobian closure. Quadratics differentiate exactly under
// second-order stencils, which isolates other error sources in grid tests.
struct PolyPotential {
  std::array<double, 4> c0{};
  std::array<std::array<double, 4>, 4> c1{};        // c1[j][i] xi_j
  std::array<std::array<std::array<double, 4>, 4>, 4> c2{};  // c2[j][k][i] xi_j xi_k (j<=k)

  static PolyPotential random(Rng& rng, double scale = 1.0) {
    PolyPotential p;
    for (int i = 0; i < 4; ++i) {
      p.c0[i] = rng.sym(scale);
      for (int j = 0; j < 4; ++j) p.c1[j][i] = rng.sym(scale);
      for (int j = 0; j < 4; ++j)
        for (int k = j; k < 4; ++k) p.c2[j][k][i] = rng.sym(scale);
    }
    return p;
  }

  AnalyticPotential closure(double light_speed) const {
    const PolyPotential p = *this;
    const double c = light_speed;
    AnalyticPotential out;
    out.value = [p, c](const Event& e) {
      const std::array<double, 4> xi{c * e.t, e.r.x, e.r.y, e.r.z};
      FourVector v{p.c0[0], p.c0[1], p.c0[2], p.c0[3]};
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) v[i] += p.c1[j][i] * xi[j];
        for (int j = 0; j < 4; ++j)
          for (int k = j; k < 4; ++k) v[i] += p.c2[j][k][i] * xi[j] * xi[k];
      }
      return v;
    };
    out.jacobian = [p, c](const Event& e) {
      const std::array<double, 4> xi{c * e.t, e.r.x, e.r.y, e.r.z};
      Mat4 jac;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double d = p.c1[j][i];
          for (int k = 0; k < 4; ++k) {
            if (j <= k) d += p.c2[j][k][i] * xi[k] * (j == k ? 2.0 : 1.0);
            if (k < j) d += p.c2[k][j][i] * xi[k];
          }
          jac[j][i] = d;
        }
      return jac;
    };
    return out;
  }
};

}  // namespace dyon::testing

#endif
