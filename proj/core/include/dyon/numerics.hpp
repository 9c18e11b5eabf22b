#ifndef DYON_NUMERICS_HPP
#define DYON_NUMERICS_HPP

#include <cstddef>
#include <span>

namespace dyon {

/// Pairwise (cascade) summation; deterministic for a given element order and
/// much better conditioned than a running sum for large grids.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace dyon

#endif
