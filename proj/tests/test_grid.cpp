#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dyon/field_grid.hpp"
#include "support/random_fields.hpp"

using namespace dyon;

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec small_spec(int n, double cfl_fraction = 0.5, int threads = 1) {
  GridSpec s;
  s.n = {n, n, n};
  s.h = 1.0 / n;
  s.c = 1.0;
  s.dt = cfl_fraction * s.h / (s.c * std::sqrt(3.0));
  s.threads = threads;
  return s;
}

// Backward-difference divergence at nodes (edge-vector fields).
double div_node(const FieldGrid& g, const std::array<const std::vector<double>*, 3>& f, int i,
                int j, int k) {
  const auto [nx, ny, nz] = g.spec().n;
  const int im = i == 0 ? nx - 1 : i - 1;
  const int jm = j == 0 ? ny - 1 : j - 1;
  const int km = k == 0 ? nz - 1 : k - 1;
  return ((*f[0])[g.index(i, j, k)] - (*f[0])[g.index(im, j, k)] +
          (*f[1])[g.index(i, j, k)] - (*f[1])[g.index(i, jm, k)] +
          (*f[2])[g.index(i, j, k)] - (*f[2])[g.index(i, j, km)]) / g.spec().h;
}

// Forward-difference divergence at cells (face-vector fields).
double div_cell(const FieldGrid& g, const std::array<const std::vector<double>*, 3>& f, int i,
                int j, int k) {
  const auto [nx, ny, nz] = g.spec().n;
  const int ip = i + 1 == nx ? 0 : i + 1;
  const int jp = j + 1 == ny ? 0 : j + 1;
  const int kp = k + 1 == nz ? 0 : k + 1;
  return ((*f[0])[g.index(ip, j, k)] - (*f[0])[g.index(i, j, k)] +
          (*f[1])[g.index(i, jp, k)] - (*f[1])[g.index(i, j, k)] +
          (*f[2])[g.index(i, j, kp)] - (*f[2])[g.index(i, j, k)]) / g.spec().h;
}

FieldState plane_wave_at(const Vec3& r, double t, double e0, double kmag) {
  const double phase = kmag * r.x - kmag * t;  // c = 1, along +x, E along y
  const double ef = e0 * std::cos(phase);
  return {{0.0, ef, 0.0}, {0.0, 0.0, ef}};
}

}  // namespace

TEST_CASE("construction validates the stability bound and shape order") {
  GridSpec bad = small_spec(8);
  bad.dt = 1.01 * bad.h / std::sqrt(3.0);
  CHECK_THROWS_AS(FieldGrid{bad}, std::invalid_argument);
  GridSpec shape = small_spec(8);
  shape.spline_order = 2;
  CHECK_THROWS_AS(FieldGrid{shape}, std::invalid_argument);
  CHECK_NOTHROW(FieldGrid{small_spec(8)});
}

TEST_CASE("uniform source-free fields are a fixed point of the update") {
  FieldGrid g(small_spec(8));
  g.set_uniform({0.3, -0.2, 0.1}, {0.0, 0.5, -0.4});
  const auto e_before = g.e_component(1);
  const auto b_before = g.b_component(2);
  for (int s = 0; s < 10; ++s) g.step();
  CHECK(g.e_component(1) == e_before);
  CHECK(g.b_component(2) == b_before);
  const auto [ge, gm] = g.max_gauss_residuals();
  CHECK(ge == 0.0);
  CHECK(gm == 0.0);
}

TEST_CASE("deposition satisfies discrete continuity exactly") {
  testing::Rng rng(51);
  for (int order : {1, 3}) {
    GridSpec spec = small_spec(12);
    spec.spline_order = order;
    FieldGrid g(spec);

    for (int trial = 0; trial < 10; ++trial) {
      FieldGrid before = g;
      const Vec3 x0{0.3 + 0.4 * rng.sym(), 0.5 + 0.4 * rng.sym(), 0.4 + 0.4 * rng.sym()};
      const Vec3 dx = (0.45 * spec.h) * rng.vec();
      const double qe = 1.0 + rng.sym(0.5);
      const double qm = -0.7 + rng.sym(0.5);
      g.clear_currents();
      g.deposit_current(qe, qm, x0, x0 + dx);

      const std::array<const std::vector<double>*, 3> je{&g.j_electric(0), &g.j_electric(1),
                                                         &g.j_electric(2)};
      const std::array<const std::vector<double>*, 3> jm{&g.j_magnetic(0), &g.j_magnetic(1),
                                                         &g.j_magnetic(2)};
      const double scale =
          (std::fabs(qe) + std::fabs(qm)) / (g.cell_volume() * spec.dt);
      double worst = 0.0;
      const auto [nx, ny, nz] = spec.n;
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
          for (int k = 0; k < nz; ++k) {
            const std::size_t at = g.index(i, j, k);
            const double de = (g.rho_electric()[at] - before.rho_electric()[at]) / spec.dt +
                              div_node(g, je, i, j, k);
            const double dm = (g.rho_magnetic()[at] - before.rho_magnetic()[at]) / spec.dt +
                              div_cell(g, jm, i, j, k);
            worst = std::max({worst, std::fabs(de), std::fabs(dm)});
          }
      CHECK(worst < 1e-13 * scale);
    }
  }
}

TEST_CASE("deposited charge totals are exact and gather sees uniform fields") {
  GridSpec spec = small_spec(10);
  FieldGrid g(spec);
  g.deposit_charge(2.5, -1.25, {0.512, 0.331, 0.774});
  double qe_total = 0.0, qm_total = 0.0;
  for (double v : g.rho_electric()) qe_total += v;
  for (double v : g.rho_magnetic()) qm_total += v;
  CHECK(qe_total * g.cell_volume() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(qm_total * g.cell_volume() == doctest::Approx(-1.25).epsilon(1e-12));

  g.set_uniform({0.4, -0.3, 0.2}, {-0.1, 0.6, 0.5});
  testing::Rng rng(52);
  for (int t = 0; t < 5; ++t) {
    const Vec3 x{0.5 + 0.3 * rng.sym(), 0.5 + 0.3 * rng.sym(), 0.5 + 0.3 * rng.sym()};
    const FieldState f = g.gather(x);
    CHECK(norm_inf(f.E - Vec3{0.4, -0.3, 0.2}) < 1e-13);
    CHECK(norm_inf(f.B - Vec3{-0.1, 0.6, 0.5}) < 1e-13);
  }
}

TEST_CASE("poisson init satisfies both gauss laws and the flux theorem") {
  GridSpec spec = small_spec(16);
  FieldGrid g(spec);
  // magnetic blob and its compensating partner far away; an electric pair too
  g.deposit_charge(0.0, 1.8, {0.25, 0.25, 0.25});
  g.deposit_charge(0.0, -1.8, {0.75, 0.75, 0.75});
  g.deposit_charge(0.9, 0.0, {0.3, 0.7, 0.4});
  g.deposit_charge(-0.9, 0.0, {0.8, 0.2, 0.6});
  g.init_fields_from_charges({0.0, 0.0, 0.0}, {0.0, 0.0, 0.2});

  const auto [ge, gm] = g.max_gauss_residuals();
  const double scale = 4.0 * kPi * 1.8 / g.cell_volume();
  CHECK(ge < 1e-11 * scale);
  CHECK(gm < 1e-11 * scale);

  // discrete flux through a box enclosing only the positive magnetic blob:
  // cells [0,8) x [0,8) x [0,8); the cubic shape spans +-2h around 0.25*16=4
  double flux = 0.0;
  double enclosed = 0.0;
  const int lo = 0, hi = 8;
  for (int a = lo; a < hi; ++a)
    for (int b = lo; b < hi; ++b) {
      flux += (g.b_at(0, hi, a, b) - g.b_at(0, lo, a, b)) * spec.h * spec.h;
      flux += (g.b_at(1, a, hi, b) - g.b_at(1, a, lo, b)) * spec.h * spec.h;
      flux += (g.b_at(2, a, b, hi) - g.b_at(2, a, b, lo)) * spec.h * spec.h;
    }
  for (int i = lo; i < hi; ++i)
    for (int j = lo; j < hi; ++j)
      for (int k = lo; k < hi; ++k) enclosed += g.rho_magnetic()[g.index(i, j, k)];
  enclosed *= g.cell_volume();
  CHECK(enclosed == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(flux == doctest::Approx(4.0 * kPi * enclosed).epsilon(1e-10));
}

TEST_CASE("source-free evolution preserves the gauss residuals") {
  GridSpec spec = small_spec(12);
  FieldGrid g(spec);
  g.deposit_charge(1.0, -0.5, {0.4, 0.5, 0.55});
  g.deposit_charge(-1.0, 0.5, {0.8, 0.15, 0.3});
  g.init_fields_from_charges({0.05, 0.0, 0.0}, {0.0, 0.0, 0.3});
  const auto [e0, m0] = g.max_gauss_residuals();
  for (int s = 0; s < 200; ++s) g.step();
  const auto [e1, m1] = g.max_gauss_residuals();
  const double scale = 4.0 * kPi / g.cell_volume();
  CHECK(std::fabs(e1 - e0) < 1e-12 * scale);
  CHECK(std::fabs(m1 - m0) < 1e-12 * scale);
}

TEST_CASE("moving dyon with continuity-exact deposition keeps residuals pinned") {
  GridSpec spec = small_spec(12);
  FieldGrid g(spec);
  const double qe = 0.8, qm = -0.6;
  const Vec3 center{0.5, 0.5, 0.5};
  const double orbit_r = 0.2, omega = 2.0;
  const auto pos = [&](double t) {
    return center + Vec3{orbit_r * std::cos(omega * t), orbit_r * std::sin(omega * t), 0.0};
  };
  g.deposit_charge(qe, qm, pos(0.0));
  g.init_fields_from_charges();
  const auto [e0, m0] = g.max_gauss_residuals();

  double t = 0.0;
  for (int s = 0; s < 300; ++s) {
    g.clear_currents();
    g.deposit_current(qe, qm, pos(t), pos(t + spec.dt));
    g.step();
    t += spec.dt;
  }
  const auto [e1, m1] = g.max_gauss_residuals();
  const double scale = 4.0 * kPi * (std::fabs(qe) + std::fabs(qm)) / g.cell_volume();
  CHECK(std::fabs(e1 - e0) < 1e-11 * scale);
  CHECK(std::fabs(m1 - m0) < 1e-11 * scale);
}

TEST_CASE("vacuum plane wave: second-order convergence and energy content") {
  const double e0 = 0.75, kmag = 2.0 * kPi;
  double l2[3];
  for (int level = 0; level < 3; ++level) {
    const int n = 16 << level;
    GridSpec spec = small_spec(n);
    FieldGrid g(spec);
    g.fill([&](const Vec3& r) { return plane_wave_at(r, 0.0, e0, kmag); });

    const int steps = int(std::lround(0.5 / spec.dt));
    for (int s = 0; s < steps; ++s) g.step();
    const double tf = steps * spec.dt;

    double acc = 0.0;
    const auto [nx, ny, nz] = spec.n;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        for (int k = 0; k < nz; ++k)
          for (int comp = 0; comp < 3; ++comp) {
            const double de = g.e_at(comp, i, j, k) -
                              plane_wave_at(g.e_position(comp, i, j, k), tf, e0, kmag).E[comp];
            const double db = g.b_at(comp, i, j, k) -
                              plane_wave_at(g.b_position(comp, i, j, k), tf, e0, kmag).B[comp];
            acc += de * de + db * db;
          }
    l2[level] = std::sqrt(acc * g.cell_volume());

    if (level == 1) {
      // energy density of the wave: average E^2 = e0^2/2, same for B
      const double expected = e0 * e0 / (8.0 * kPi);
      CHECK(g.field_energy() == doctest::Approx(expected).epsilon(5e-3));
      const Vec3 p = g.field_momentum();
      CHECK(p.x == doctest::Approx(expected).epsilon(5e-3));  // |P| = U/c along k
      CHECK(std::fabs(p.y) < 1e-12);
      CHECK(std::fabs(p.z) < 1e-12);
    }
  }
  CHECK(std::log2(l2[0] / l2[1]) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(l2[1] / l2[2]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("vacuum update is time-reversible") {
  GridSpec spec = small_spec(16);
  FieldGrid g(spec);
  g.fill([&](const Vec3& r) { return plane_wave_at(r, 0.0, 1.0, 2.0 * kPi); });
  const auto ex0 = g.e_component(0);
  const auto ey0 = g.e_component(1);
  const auto bz0 = g.b_component(2);

  for (int s = 0; s < 64; ++s) g.step();
  g.reverse_time();
  for (int s = 0; s < 64; ++s) g.step();

  double worst = 0.0;
  for (std::size_t m = 0; m < g.cells(); ++m) {
    worst = std::max(worst, std::fabs(g.e_component(0)[m] - ex0[m]));
    worst = std::max(worst, std::fabs(g.e_component(1)[m] - ey0[m]));
    worst = std::max(worst, std::fabs(g.b_component(2)[m] - bz0[m]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("duality map commutes with the update bitwise") {
  GridSpec spec = small_spec(10);
  FieldGrid g(spec);
  g.fill([&](const Vec3& r) {
    return FieldState{{std::sin(2.0 * kPi * r.y), 0.2, std::cos(2.0 * kPi * r.x)},
                      {0.1, std::sin(2.0 * kPi * r.z), -0.3}};
  });
  g.clear_currents();
  g.deposit_current(1.2, -0.8, {0.41, 0.52, 0.63}, {0.43, 0.50, 0.64});

  FieldGrid mapped = g.duality_mapped();
  g.step();
  mapped.step();
  const FieldGrid expect = g.duality_mapped();

  for (int c = 0; c < 3; ++c) {
    CHECK(mapped.e_component(c) == expect.e_component(c));
    CHECK(mapped.b_component(c) == expect.b_component(c));
  }
  CHECK(mapped.rho_electric() == expect.rho_electric());
  CHECK(mapped.rho_magnetic() == expect.rho_magnetic());

  // double application returns to the original layout with flipped signs
  const FieldGrid twice = expect.duality_mapped();
  for (std::size_t m = 0; m < g.cells(); ++m)
    CHECK(twice.e_component(0)[m] == -g.e_component(0)[m]);
}

TEST_CASE("update is bitwise independent of the worker count") {
  FieldGrid a(small_spec(12, 0.5, 1));
  FieldGrid b(small_spec(12, 0.5, 4));
  for (FieldGrid* g : {&a, &b}) {
    g->deposit_charge(1.0, 0.4, {0.35, 0.55, 0.5});
    g->init_fields_from_charges({0.0, 0.1, 0.0}, {0.0, 0.0, 0.4});
    g->clear_currents();
    g->deposit_current(1.0, 0.4, {0.35, 0.55, 0.5}, {0.36, 0.55, 0.51});
    for (int s = 0; s < 20; ++s) g->step();
  }
  for (int c = 0; c < 3; ++c) {
    CHECK(a.e_component(c) == b.e_component(c));
    CHECK(a.b_component(c) == b.b_component(c));
  }
}

TEST_CASE("displacement above one cell is rejected") {
  GridSpec spec = small_spec(8);
  FieldGrid g(spec);
  CHECK_THROWS_AS(
      g.deposit_current(1.0, 0.0, {0.5, 0.5, 0.5}, {0.5 + 1.5 * spec.h, 0.5, 0.5}),
      std::invalid_argument);
}

TEST_CASE("damped boundary drains a propagating pulse") {
  GridSpec spec = small_spec(16);
  spec.boundary = GridBoundary::damped;
  spec.damping_width = 5;
  spec.damping = 0.1;
  FieldGrid g(spec);
  g.fill([&](const Vec3& r) {
    const Vec3 rel = r - Vec3{0.5, 0.5, 0.5};
    const double amp = std::exp(-dot(rel, rel) / 0.01);
    return FieldState{{0.0, amp, 0.0}, {0.0, 0.0, amp}};
  });
  const double u0 = g.field_energy();
  double prev = u0;
  for (int burst = 0; burst < 4; ++burst) {
    for (int s = 0; s < 200; ++s) g.step();
    CHECK(g.field_energy() < prev);
    prev = g.field_energy();
  }
  CHECK(g.field_energy() < 0.05 * u0);
}
