#ifndef DYON_RETARDED_HPP
#define DYON_RETARDED_HPP

#include <functional>

#include "dyon/event.hpp"
#include "dyon/field_state.hpp"
#include "dyon/minkowski.hpp"
#include "dyon/potentials.hpp"

namespace dyon {

/// Time-parameterized source worldline; must stay subluminal for every
/// queried time.
struct Trajectory {
  std::function<Vec3(double)> position;
  std::function<Vec3(double)> velocity;

  static Trajectory at_rest(const Vec3& x0) {
    return {[x0](double) { return x0; }, [](double) { return Vec3{}; }};
  }
  static Trajectory uniform(const Vec3& x0, const Vec3& v) {
    return {[x0, v](double t) { return x0 + t * v; }, [v](double) { return v; }};
  }
};

/// Point particle carrying electric charge q_e and magnetic charge q_m
/// (same units, Gaussian system).
struct PointDyonSource {
  double qe = 0.0;
  double qm = 0.0;
  Trajectory trajectory;
};

struct RetardedSample {
  FourVector a;      ///< A^i at the event
  FourVector c;      ///< C^i at the event
  double t_ret;      ///< emission time on the worldline
};

/// Lienard-Wiechert solution of the dual wave equations for a point dyon:
///   A^i = q_e u^i / (u . R),  C^i = q_m u^i / (u . R)
/// with u the four-velocity at the retarded event and R the null separation.
/// The retarded time solves t_ret + |r - r_s(t_ret)|/c = t (bracketed
/// bisection polished by Newton; unique root for subluminal motion).
RetardedSample retarded_potentials(const PointDyonSource& src, const Event& e,
                                   double light_speed = 1.0);

/// (E, B) of the point dyon: adaptive central differences of the retarded
/// potentials pushed through the two-potential field relations. Static limit
/// is the dual pair of Coulomb fields E = q_e r/|r|^3, B = q_m r/|r|^3.
FieldState fields_of_point_dyon(const PointDyonSource& src, const Event& e,
                                double light_speed = 1.0);

/// The same solution wrapped as an analytic PotentialPair (for sampling onto
/// grids and for the gauge/residual diagnostics).
PotentialPair potential_pair_of(const PointDyonSource& src, double light_speed = 1.0,
                                FdScales scales = {});

}  // namespace dyon

#endif
