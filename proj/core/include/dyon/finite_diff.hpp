#ifndef DYON_FINITE_DIFF_HPP
#define DYON_FINITE_DIFF_HPP

#include <cmath>
#include <limits>

#include "dyon/event.hpp"

namespace dyon {

/// Step size for second-order central differences of an analytic closure:
/// cbrt(eps) scaling balances truncation against rounding.
inline double fd_step(double scale) {
  static const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  return cbrt_eps * scale;
}

/// Central difference of a callable along one event axis (0 = t, 1..3 = x..z).
/// Works for any return type with operator- and operator*(double, T).
template <typename F>
auto central_difference(F&& f, const Event& e, int axis, double step) {
  return (1.0 / (2.0 * step)) * (f(shifted(e, axis, step)) - f(shifted(e, axis, -step)));
}

/// Length/time scales used to size adaptive difference steps.
struct FdScales {
  double length = 1.0;
  double time = 1.0;

  double step(int axis, const Event& e) const {
    if (axis == 0) return fd_step(std::max(std::fabs(e.t), time));
    return fd_step(std::max(std::fabs(e.r[axis - 1]), length));
  }
};

}  // namespace dyon

#endif
