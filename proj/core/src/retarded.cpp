#include "dyon/retarded.hpp"

#include <cmath>
#include <stdexcept>

namespace dyon {

namespace {

struct RetardedTime {
  double t_ret;
  Vec3 r_src;
  Vec3 v_src;
  double distance;
  double time_tol;
};

RetardedTime solve_retarded_time(const Trajectory& traj, const Event& e, double c) {
  const auto lag = [&](double tr) { return tr + norm(e.r - traj.position(tr)) / c - e.t; };

  // lag is strictly increasing in tr (slope >= 1 - |v|/c > 0), lag(e.t) >= 0.
  double hi = e.t;
  double lag_hi = lag(hi);
  if (lag_hi < 0.0) throw std::runtime_error("retarded-time bracket failed (lag(t) < 0)");

  double step = norm(e.r - traj.position(e.t)) / c;
  if (step <= 0.0) step = 1.0;
  double lo = hi - step;
  double lag_lo = lag(lo);
  int guard = 0;
  while (lag_lo > 0.0) {
    step *= 2.0;
    lo = hi - step;
    lag_lo = lag(lo);
    if (++guard > 200) throw std::runtime_error("retarded-time bracket failed to expand");
  }

  const double tol = 1e-12 * std::max({std::fabs(e.t), step, 1.0});
  double tr = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const Vec3 rs = traj.position(tr);
    const Vec3 rel = e.r - rs;
    const double dist = norm(rel);
    const double f = tr + dist / c - e.t;
    if (std::fabs(f) <= tol) break;
    if (f > 0.0)
      hi = tr;
    else
      lo = tr;
    // Newton step, guarded by the bracket.
    double next = tr;
    if (dist > 0.0) {
      const Vec3 v = traj.velocity(tr);
      const double slope = 1.0 - dot(rel, v) / (dist * c);
      if (slope > 0.0) next = tr - f / slope;
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    tr = next;
  }

  RetardedTime out;
  out.t_ret = tr;
  out.r_src = traj.position(tr);
  out.v_src = traj.velocity(tr);
  out.distance = norm(e.r - out.r_src);
  out.time_tol = tol;
  return out;
}

}  // namespace

RetardedSample retarded_potentials(const PointDyonSource& src, const Event& e,
                                   double light_speed) {
  const double c = light_speed;
  const RetardedTime rt = solve_retarded_time(src.trajectory, e, c);
  if (rt.distance <= 100.0 * c * rt.time_tol)
    throw std::domain_error("field point lies on the source trajectory");

  const FourVector u = four_velocity(rt.v_src, c);
  const FourVector sep{c * (e.t - rt.t_ret), e.r - rt.r_src};
  const double denom = minkowski_dot(u, sep);
  if (denom <= 0.0) throw std::runtime_error("degenerate retarded denominator");

  RetardedSample out;
  out.t_ret = rt.t_ret;
  out.a = (src.qe * c / denom) * u;
  out.c = (src.qm * c / denom) * u;
  return out;
}

FieldState fields_of_point_dyon(const PointDyonSource& src, const Event& e,
                                double light_speed) {
  const double c = light_speed;
  const RetardedTime rt = solve_retarded_time(src.trajectory, e, c);
  const double dist = rt.distance;
  if (dist <= 100.0 * c * rt.time_tol)
    throw std::domain_error("field point lies on the source trajectory");

  Mat4 ja, jc;
  for (int axis = 0; axis < 4; ++axis) {
    const double h = axis == 0 ? fd_step(dist / c) : fd_step(dist);
    const auto a_of = [&](const Event& ev) { return retarded_potentials(src, ev, c).a; };
    const auto c_of = [&](const Event& ev) { return retarded_potentials(src, ev, c).c; };
    const FourVector da = central_difference(a_of, e, axis, h);
    const FourVector dc = central_difference(c_of, e, axis, h);
    const double unit = axis == 0 ? 1.0 / c : 1.0;
    for (int i = 0; i < 4; ++i) {
      ja[axis][i] = unit * da[i];
      jc[axis][i] = unit * dc[i];
    }
  }
  return fields_from_jacobians(ja, jc);
}

PotentialPair potential_pair_of(const PointDyonSource& src, double light_speed,
                                FdScales scales) {
  const double c = light_speed;
  AnalyticPotential a{[src, c](const Event& e) { return retarded_potentials(src, e, c).a; },
                      nullptr};
  AnalyticPotential cp{[src, c](const Event& e) { return retarded_potentials(src, e, c).c; },
                       nullptr};
  return PotentialPair::analytic(std::move(a), std::move(cp), c, scales);
}

}  // namespace dyon
