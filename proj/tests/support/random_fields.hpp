#ifndef DYON_TESTS_RANDOM_FIELDS_HPP
#define DYON_TESTS_RANDOM_FIELDS_HPP

#include <random>

#include "dyon/field_state.hpp"
#include "dyon/vec3.hpp"

namespace dyon::testing {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double sym(double scale = 1.0) { return scale * (2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0); }
  Vec3 vec(double scale = 1.0) { return {sym(scale), sym(scale), sym(scale)}; }
  FieldState field(double scale = 1.0) { return {vec(scale), vec(scale)}; }
};

}  // namespace dyon::testing

#endif
