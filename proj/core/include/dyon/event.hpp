#ifndef DYON_EVENT_HPP
#define DYON_EVENT_HPP

#include "dyon/vec3.hpp"

namespace dyon {

/// Spacetime sample point in physical coordinates (t in time units, r in
/// length units; the x^0 = c*t convention is applied inside derivative code).
struct Event {
  double t = 0.0;
  Vec3 r;

  friend constexpr bool operator==(const Event&, const Event&) = default;
};

constexpr Event shifted(const Event& e, int axis, double step) {
  Event out = e;
  if (axis == 0)
    out.t += step;
  else
    out.r[axis - 1] += step;
  return out;
}

}  // namespace dyon

#endif
