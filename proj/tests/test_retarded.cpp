#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dyon/action.hpp"
#include "dyon/retarded.hpp"
#include "support/random_fields.hpp"

using namespace dyon;

TEST_CASE("zero charges give zero potentials and fields") {
  PointDyonSource src{0.0, 0.0, Trajectory::uniform({0.2, 0.0, 0.0}, {0.1, 0.05, 0.0})};
  const Event e{1.0, {1.0, 2.0, -0.5}};
  const auto s = retarded_potentials(src, e);
  CHECK(norm_inf(s.a) == 0.0);
  CHECK(norm_inf(s.c) == 0.0);
  const FieldState f = fields_of_point_dyon(src, e);
  CHECK(norm(f.E) == 0.0);
  CHECK(norm(f.B) == 0.0);
}

TEST_CASE("static dyon: dual Coulomb potentials and fields") {
  const double qe = 4.0, qm = -2.5;
  PointDyonSource src{qe, qm, Trajectory::at_rest({})};

  const Event e{0.7, {0.6, -0.8, 0.0}};
  const double r = norm(e.r);
  const auto s = retarded_potentials(src, e);
  CHECK(s.a[0] == doctest::Approx(qe / r).epsilon(1e-12));
  CHECK(s.c[0] == doctest::Approx(qm / r).epsilon(1e-12));
  CHECK(norm(s.a.spatial()) < 1e-12);
  CHECK(norm(s.c.spatial()) < 1e-12);
  CHECK(s.t_ret == doctest::Approx(e.t - r / 1.0).epsilon(1e-12));

  // the dual pair of inverse-square fields
  const Event probe{0.0, {2.0, 0.0, 0.0}};
  const FieldState f = fields_of_point_dyon(src, probe);
  CHECK(f.E.x == doctest::Approx(qe / 4.0).epsilon(1e-8));
  CHECK(std::fabs(f.E.y) < 1e-8);
  CHECK(std::fabs(f.E.z) < 1e-8);
  CHECK(f.B.x == doctest::Approx(qm / 4.0).epsilon(1e-8));
  CHECK(std::fabs(f.B.y) < 1e-8);

  // pure electric / pure magnetic split
  PointDyonSource elec{4.0, 0.0, Trajectory::at_rest({})};
  const FieldState fe = fields_of_point_dyon(elec, probe);
  CHECK(fe.E.x == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(norm(fe.B) < 1e-8);
  PointDyonSource mono{0.0, 4.0, Trajectory::at_rest({})};
  const FieldState fm = fields_of_point_dyon(mono, probe);
  CHECK(fm.B.x == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(norm(fm.E) < 1e-8);
}

TEST_CASE("querying on the worldline is a singularity error") {
  PointDyonSource src{1.0, 0.0, Trajectory::uniform({}, {0.25, 0.0, 0.0})};
  CHECK_THROWS_AS((void)retarded_potentials(src, Event{2.0, {0.5, 0.0, 0.0}}),
                  std::domain_error);
}

TEST_CASE("uniformly moving dyon matches the boosted static solution") {
  const double c = 1.0;
  const Vec3 v{0.6, 0.0, 0.0};
  const double qe = 1.5, qm = -0.8;
  PointDyonSource src{qe, qm, Trajectory::uniform({}, v)};

  testing::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Event e{rng.sym(2.0), rng.vec(2.0)};
    if (norm(e.r - e.t * v) < 0.3) continue;
    const auto got = retarded_potentials(src, e, c);

    // boost oracle: transform the event to the rest frame, evaluate the
    // static Coulomb pair, boost the four-potentials back
    const Vec3 beta = v / c;
    const FourVector x_lab{c * e.t, e.r};
    const FourVector x_rest = boost(x_lab, beta);
    const double r_rest = norm(x_rest.spatial());
    const FourVector a_rest{qe / r_rest, {}};
    const FourVector c_rest{qm / r_rest, {}};
    const FourVector a_lab = boost(a_rest, -1.0 * beta);
    const FourVector c_lab = boost(c_rest, -1.0 * beta);

    CHECK(norm_inf(got.a - a_lab) < 1e-10 * (1.0 + norm_inf(a_lab)));
    CHECK(norm_inf(got.c - c_lab) < 1e-10 * (1.0 + norm_inf(c_lab)));
  }
}

TEST_CASE("uniformly moving charge fields: closed form and B = beta x E") {
  const double c = 1.0, q = 2.0;
  const Vec3 v{0.5, 0.0, 0.0};
  PointDyonSource src{q, 0.0, Trajectory::uniform({}, v)};
  const double beta2 = dot(v, v) / (c * c);

  testing::Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Event e{rng.sym(), rng.vec(1.5)};
    const Vec3 rel = e.r - e.t * v;  // from the present position
    if (norm(rel) < 0.4) continue;
    const FieldState f = fields_of_point_dyon(src, e, c);

    const double sin2 = 1.0 - (dot(rel, v) * dot(rel, v)) / (dot(rel, rel) * dot(v, v));
    const double denom = std::pow(1.0 - beta2 * sin2, 1.5);
    const Vec3 expect_e = q * (1.0 - beta2) / (dot(rel, rel) * denom) * (rel / norm(rel));
    CHECK(norm_inf(f.E - expect_e) < 1e-6 * (1.0 + norm_inf(expect_e)));
    CHECK(norm_inf(f.B - cross(v / c, f.E)) < 1e-6 * (1.0 + norm_inf(f.E)));
  }
}

TEST_CASE("sampled worldline potentials satisfy gauge and field equations") {
  const double c = 1.0;
  // circular motion, |v| = 0.3 c
  const double orbit_r = 0.6, omega = 0.5;
  Trajectory circular{
      [=](double t) {
        return Vec3{orbit_r * std::cos(omega * t), orbit_r * std::sin(omega * t), 0.0};
      },
      [=](double t) {
        return Vec3{-orbit_r * omega * std::sin(omega * t), orbit_r * omega * std::cos(omega * t),
                    0.0};
      }};
  PointDyonSource src{1.0, -0.5, circular};
  const auto pair = potential_pair_of(src, c);

  const Event probe{0.0, {2.0, 0.4, 0.3}};
  double lorenz[2], maxwell[2];
  for (int level = 0; level < 2; ++level) {
    GridSampling grid;
    const int cells = 6 << level;
    grid.nt = grid.nx = grid.ny = grid.nz = cells + 1;
    grid.dt = grid.dx = grid.dy = grid.dz = 0.36 / cells;
    grid.t0 = probe.t - 0.18;
    grid.origin = probe.r - Vec3{0.18, 0.18, 0.18};
    const auto sampled = PotentialPair::sampled(pair, grid);
    const auto [la, lc] = sampled.lorenz_residuals(probe);
    lorenz[level] = std::max(std::fabs(la), std::fabs(lc));
    const auto [re, rm] = euler_lagrange_residuals(sampled, SourceField::none(), probe);
    maxwell[level] = std::max(norm_inf(re), norm_inf(rm));
  }
  // second-order convergence to zero for both diagnostics
  CHECK(lorenz[1] < 0.35 * lorenz[0]);
  CHECK(maxwell[1] < 0.35 * maxwell[0]);
}
