#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dyon/potentials.hpp"
#include "support/poly_potential.hpp"
#include "support/random_fields.hpp"

using namespace dyon;

namespace {

AnalyticPotential zero_potential() {
  return {[](const Event&) { return FourVector{}; }, [](const Event&) { return Mat4{}; }};
}

// Coulomb-type scalar potential q/|r - r0| with its exact jacobian.
AnalyticPotential coulomb_potential(double q, const Vec3& r0) {
  AnalyticPotential p;
  p.value = [q, r0](const Event& e) {
    const Vec3 rel = e.r - r0;
    return FourVector{q / norm(rel), {}};
  };
  p.jacobian = [q, r0](const Event& e) {
    const Vec3 rel = e.r - r0;
    const double r = norm(rel);
    Mat4 j;
    for (int a = 0; a < 3; ++a) j[a + 1][0] = -q * rel[a] / (r * r * r);
    return j;
  };
  return p;
}

// Smooth localized gauge scalar with exact gradient and hessian closures in
// the (x^0 = c t, x, y, z) coordinates.
GaugeScalars gaussian_gauge(double amp, const Vec3& r0, double w, double t0, double wt,
                            double c) {
  GaugeScalars g;
  const auto psi = [=](const Event& e) {
    const Vec3 rel = e.r - r0;
    const double ct = c * (e.t - t0);
    return amp * std::exp(-dot(rel, rel) / (w * w) - ct * ct / (wt * wt));
  };
  const auto logderiv = [=](const Event& e) {
    const Vec3 rel = e.r - r0;
    const double ct = c * (e.t - t0);
    return std::array<double, 4>{-2.0 * ct / (wt * wt), -2.0 * rel.x / (w * w),
                                 -2.0 * rel.y / (w * w), -2.0 * rel.z / (w * w)};
  };
  g.psi = psi;
  g.psi_prime = [=](const Event& e) { return -0.5 * psi(e); };
  g.grad_psi = [=](const Event& e) {
    const auto u = logderiv(e);
    const double v = psi(e);
    return FourVector{v * u[0], v * u[1], v * u[2], v * u[3]};
  };
  g.grad_psi_prime = [=](const Event& e) {
    const auto u = logderiv(e);
    const double v = -0.5 * psi(e);
    return FourVector{v * u[0], v * u[1], v * u[2], v * u[3]};
  };
  const double wt2 = wt * wt, w2 = w * w;
  const auto hess = [=](const Event& e) {
    const auto u = logderiv(e);
    const double v = psi(e);
    Mat4 h;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        h[a][b] = v * u[a] * u[b];
        if (a == b) h[a][b] += v * (a == 0 ? -2.0 / wt2 : -2.0 / w2);
      }
    return h;
  };
  g.hessian_psi = hess;
  g.hessian_psi_prime = [=](const Event& e) {
    Mat4 h = hess(e);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) h[a][b] *= -0.5;
    return h;
  };
  return g;
}

// (E, B) read straight off the F^{ik} matrix layout.
FieldState fields_from_tensor_view(const Mat4& f) {
  return {{f[1][0], f[2][0], f[3][0]}, {f[3][2], f[1][3], f[2][1]}};
}

double field_max_diff(const FieldState& a, const FieldState& b) {
  return std::max(norm_inf(a.E - b.E), norm_inf(a.B - b.B));
}

}  // namespace

TEST_CASE("zero potentials give zero fields") {
  const auto p = PotentialPair::analytic(zero_potential(), zero_potential());
  const FieldState f = p.fields_at(Event{0.3, {0.1, -0.2, 0.5}});
  CHECK(f.E == Vec3{});
  CHECK(f.B == Vec3{});
}

TEST_CASE("Coulomb scalar potentials give the dual pair of radial fields") {
  // analytic gradient oracle: V = q/r gives E = q rhat / r^2
  const double q = 2.5, g = -1.75;
  const auto p = PotentialPair::analytic(coulomb_potential(q, {}), coulomb_potential(g, {}));
  const Event e{0.0, {0.6, -0.8, 1.2}};
  const double r = norm(e.r);
  const Vec3 expect_e = q / (r * r) * (e.r / r);
  const Vec3 expect_b = g / (r * r) * (e.r / r);
  const FieldState f = p.fields_at(e);
  CHECK(norm_inf(f.E - expect_e) < 1e-13);
  CHECK(norm_inf(f.B - expect_b) < 1e-13);

  // same result through adaptive differences of the value closure alone
  AnalyticPotential av = coulomb_potential(q, {});
  av.jacobian = nullptr;
  AnalyticPotential cv = coulomb_potential(g, {});
  cv.jacobian = nullptr;
  const auto pfd = PotentialPair::analytic(std::move(av), std::move(cv));
  const FieldState ffd = pfd.fields_at(e);
  CHECK(norm_inf(ffd.E - expect_e) < 1e-8);
  CHECK(norm_inf(ffd.B - expect_b) < 1e-8);
}

TEST_CASE("tensor-route assembly agrees with the vector relations") {
  testing::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pa = testing::PolyPotential::random(rng);
    const auto pc = testing::PolyPotential::random(rng);
    const auto p = PotentialPair::analytic(pa.closure(1.0), pc.closure(1.0));
    const Event e{rng.sym(), rng.vec()};
    const auto [f_up, g_up] = p.field_tensors_at(e);
    const FieldState f = p.fields_at(e);

    const FieldState from_f = fields_from_tensor_view(f_up);
    CHECK(field_max_diff(from_f, f) < 1e-12);

    // G must be the dual layout of the same field
    const FieldState from_g = fields_from_tensor_view(g_up);
    CHECK(field_max_diff(from_g, hodge_dual(f)) < 1e-12);

    // antisymmetry of both assembled tensors
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        CHECK(f_up[i][k] == doctest::Approx(-f_up[k][i]).epsilon(1e-13));
        CHECK(g_up[i][k] == doctest::Approx(-g_up[k][i]).epsilon(1e-13));
      }
  }
}

TEST_CASE("potential exchange maps the fields to their dual") {
  testing::Rng rng(22);
  const auto pa = testing::PolyPotential::random(rng);
  const auto pc = testing::PolyPotential::random(rng);
  const auto p = PotentialPair::analytic(pa.closure(1.0), pc.closure(1.0));

  // (A, C) -> (C, -A)
  auto negated_a = pa.closure(1.0);
  auto neg_value = [inner = negated_a.value](const Event& e) {
    FourVector v = inner(e);
    return FourVector{-v[0], -v[1], -v[2], -v[3]};
  };
  auto neg_jac = [inner = negated_a.jacobian](const Event& e) {
    Mat4 j = inner(e);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) j[a][b] = -j[a][b];
    return j;
  };
  const auto swapped =
      PotentialPair::analytic(pc.closure(1.0), AnalyticPotential{neg_value, neg_jac});

  for (int trial = 0; trial < 10; ++trial) {
    const Event e{rng.sym(), rng.vec()};
    const FieldState f = p.fields_at(e);
    const FieldState fd = swapped.fields_at(e);
    CHECK(field_max_diff(fd, hodge_dual(f)) < 1e-12);
  }
}

TEST_CASE("gauge transform: constants and linear-in-time scalars") {
  testing::Rng rng(23);
  const auto pa = testing::PolyPotential::random(rng);
  const auto pc = testing::PolyPotential::random(rng);
  const double c = 2.0;
  const auto p = PotentialPair::analytic(pa.closure(c), pc.closure(c), c);

  GaugeScalars constant;
  constant.psi = [](const Event&) { return 3.25; };
  constant.psi_prime = [](const Event&) { return -1.5; };
  constant.grad_psi = [](const Event&) { return FourVector{}; };
  constant.grad_psi_prime = [](const Event&) { return FourVector{}; };
  const auto pg = p.apply_gauge(constant);
  const Event e{0.4, {0.3, -0.6, 0.2}};
  CHECK(norm_inf(pg.a_at(e) - p.a_at(e)) == 0.0);
  CHECK(norm_inf(pg.c_at(e) - p.c_at(e)) == 0.0);

  // psi = c*t: the scalar potential drops by one, the vector part stays
  GaugeScalars linear;
  linear.psi = [c](const Event& ev) { return c * ev.t; };
  linear.psi_prime = [](const Event&) { return 0.0; };
  linear.grad_psi = [](const Event&) { return FourVector{1.0, 0.0, 0.0, 0.0}; };
  linear.grad_psi_prime = [](const Event&) { return FourVector{}; };
  const auto pl = p.apply_gauge(linear);
  const FourVector da = pl.a_at(e) - p.a_at(e);
  CHECK(da[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(da[1] == 0.0);
  CHECK(da[2] == 0.0);
  CHECK(da[3] == 0.0);
}

TEST_CASE("gauge invariance is exact in analytic mode") {
  testing::Rng rng(24);
  const double c = 1.0;
  const auto pa = testing::PolyPotential::random(rng);
  const auto pc = testing::PolyPotential::random(rng);
  const auto p = PotentialPair::analytic(pa.closure(c), pc.closure(c), c);
  const auto g = gaussian_gauge(0.8, {0.1, -0.2, 0.3}, 0.9, 0.1, 1.1, c);
  const auto pg = p.apply_gauge(g);

  for (int trial = 0; trial < 25; ++trial) {
    const Event e{rng.sym(0.5), rng.vec(0.5)};
    // exact up to the last-place rounding of the assembly sums
    const double scale = 1.0 + field_max_diff(p.fields_at(e), FieldState{});
    CHECK(field_max_diff(pg.fields_at(e), p.fields_at(e)) <= 1e-14 * scale);
  }
}

TEST_CASE("sampled grids reproduce analytic fields and reject exterior points") {
  testing::Rng rng(25);
  const auto pa = testing::PolyPotential::random(rng);
  const auto pc = testing::PolyPotential::random(rng);
  const auto p = PotentialPair::analytic(pa.closure(1.0), pc.closure(1.0));

  GridSampling grid;
  grid.t0 = -0.5;
  grid.origin = {-0.5, -0.5, -0.5};
  grid.dt = grid.dx = grid.dy = grid.dz = 0.125;
  grid.nt = grid.nx = grid.ny = grid.nz = 9;
  const auto pg = PotentialPair::sampled(p, grid);

  // quadratic potentials differentiate exactly under the central stencils
  const Event node{-0.5 + 4 * 0.125, {0.0, -0.125, 0.25}};
  CHECK(field_max_diff(pg.fields_at(node), p.fields_at(node)) < 1e-12);

  // off-node interior points interpolate the nodal stencils
  const Event off{0.03, {0.11, -0.07, 0.19}};
  CHECK(field_max_diff(pg.fields_at(off), p.fields_at(off)) < 1e-12);

  CHECK_THROWS_AS((void)pg.fields_at(Event{0.0, {0.49, 0.0, 0.0}}), std::domain_error);
  CHECK_THROWS_AS((void)pg.fields_at(Event{2.0, {0.0, 0.0, 0.0}}), std::domain_error);
  CHECK_THROWS_AS((void)pg.a_at(Event{0.0, {0.0, 0.0, -0.7}}), std::domain_error);
}

TEST_CASE("gauge sampling mismatch is a shape error") {
  testing::Rng rng(26);
  const auto pa = testing::PolyPotential::random(rng);
  const auto pc = testing::PolyPotential::random(rng);
  const auto p = PotentialPair::analytic(pa.closure(1.0), pc.closure(1.0));
  GridSampling grid;
  grid.t0 = 0.0;
  grid.origin = {};
  grid.dt = grid.dx = grid.dy = grid.dz = 0.1;
  grid.nt = grid.nx = grid.ny = grid.nz = 6;
  const auto pg = PotentialPair::sampled(p, grid);

  auto g = gaussian_gauge(0.5, {0.3, 0.3, 0.3}, 0.4, 0.25, 0.5, 1.0);
  GridSampling other = grid;
  other.nx = 7;
  g.sampling = other;
  CHECK_THROWS_AS((void)pg.apply_gauge(g), std::invalid_argument);
  g.sampling = grid;
  CHECK_NOTHROW((void)pg.apply_gauge(g));
}

TEST_CASE("grid-differenced gauge terms vanish at second order") {
  testing::Rng rng(27);
  const auto pa = testing::PolyPotential::random(rng);
  const auto pc = testing::PolyPotential::random(rng);
  const auto p = PotentialPair::analytic(pa.closure(1.0), pc.closure(1.0));
  const auto g = gaussian_gauge(1.2, {0.01, 0.05, -0.03}, 0.35, -0.04, 0.45, 1.0);

  // probe on a node of every refinement level, away from the gauge bump's
  // symmetry planes (there the leading truncation term cancels)
  const Event probe{0.125, {0.0625, -0.0625, 0.125}};
  double err[3];
  for (int level = 0; level < 3; ++level) {
    GridSampling grid;
    const int cells = 8 << level;
    grid.nt = grid.nx = grid.ny = grid.nz = cells + 1;
    grid.dt = grid.dx = grid.dy = grid.dz = 0.5 / cells;
    grid.t0 = -0.25;
    grid.origin = {-0.25, -0.25, -0.25};
    const auto sampled = PotentialPair::sampled(p, grid);
    const auto gauged = sampled.apply_gauge(g);
    err[level] = field_max_diff(gauged.fields_at(probe), sampled.fields_at(probe));
  }
  const double order1 = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  CHECK(order1 == doctest::Approx(2.0).epsilon(0.15));
  CHECK(order2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("lorenz residuals: statics, harmonic gauge modes, and the trace") {
  // static Coulomb pair has vanishing four-divergence
  const auto p = PotentialPair::analytic(coulomb_potential(1.0, {}), coulomb_potential(2.0, {}));
  const auto [ra, rc] = p.lorenz_residuals(Event{0.0, {0.4, 0.5, -0.3}});
  CHECK(std::fabs(ra) < 1e-14);
  CHECK(std::fabs(rc) < 1e-14);

  // A^i = d^i psi with a wave-equation solution psi: residual is box(psi) = 0.
  // On a sampled grid the discrete residual converges at second order.
  const double c = 1.0;
  const Vec3 k{2.0, 1.0, -1.5};
  const double omega = c * norm(k);
  AnalyticPotential grad_mode;
  grad_mode.value = [=](const Event& e) {
    const double phase = dot(k, e.r) - omega * e.t;
    const double cosp = std::cos(phase);
    return FourVector{-(omega / c) * cosp, -k.x * cosp, -k.y * cosp, -k.z * cosp};
  };
  const auto pw = PotentialPair::analytic(grad_mode, zero_potential(), c);

  const Event probe{0.05, {0.1, 0.2, 0.3}};
  double res[3];
  for (int level = 0; level < 3; ++level) {
    GridSampling grid;
    const int cells = 8 << level;
    grid.nt = grid.nx = grid.ny = grid.nz = cells + 1;
    grid.dt = grid.dx = grid.dy = grid.dz = 0.8 / cells;
    grid.t0 = probe.t - 0.4;
    grid.origin = probe.r - Vec3{0.4, 0.4, 0.4};
    const auto sampled = PotentialPair::sampled(pw, grid);
    res[level] = std::fabs(sampled.lorenz_residuals(probe).first);
  }
  CHECK(std::log2(res[0] / res[1]) == doctest::Approx(2.0).epsilon(0.2));
  CHECK(std::log2(res[1] / res[2]) == doctest::Approx(2.0).epsilon(0.2));
}
