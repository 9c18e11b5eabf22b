#ifndef DYON_SCENARIO_HPP
#define DYON_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyon/field_grid.hpp"
#include "dyon/vec3.hpp"

namespace dyon {

enum class RunMode { analytic_fields, grid_evolution, identity_suite };
enum class FieldPreset { uniform, plane_wave, point_dyon, grid_init };

struct ParticleSpec {
  double m0 = 1.0;
  double qe = 0.0;
  double qm = 0.0;
  Vec3 x0;
  Vec3 v0;
  friend bool operator==(const ParticleSpec&, const ParticleSpec&) = default;
};

/// Static smoothed charge blob for grid initialization.
struct BlobSpec {
  bool magnetic = false;
  double q = 0.0;
  Vec3 center;
  friend bool operator==(const BlobSpec&, const BlobSpec&) = default;
};

/// Declarative run configuration; see the README for the key-value schema.
struct Scenario {
  RunMode mode = RunMode::analytic_fields;
  double c = 1.0;
  std::uint64_t seed = 0;
  double dt = 0.01;
  long steps = 0;
  long cadence = 1;
  int threads = 1;

  FieldPreset preset = FieldPreset::uniform;
  Vec3 e0;
  Vec3 b0;
  double wave_amplitude = 0.0;
  Vec3 wave_k{1.0, 0.0, 0.0};
  Vec3 wave_polarization{0.0, 1.0, 0.0};
  double dyon_qe = 0.0;
  double dyon_qm = 0.0;
  Vec3 dyon_position;

  std::array<int, 3> grid_n{32, 32, 32};
  double grid_h = 0.0;
  GridBoundary boundary = GridBoundary::periodic;
  int shape_order = 3;
  bool self_field = true;
  std::vector<BlobSpec> blobs;

  std::vector<ParticleSpec> particles;

  std::string records_path = "records.ndjson";
  std::string summary_path = "summary.txt";
  std::string dump_base;
  long dump_cadence = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ScenarioParseResult {
  std::optional<Scenario> scenario;      // set iff errors is empty
  std::vector<std::string> errors;       // all failures, not just the first
};

/// Parse the key-value scenario text. Unknown keys are reported with the
/// nearest valid name; constraint violations name the violated invariant.
ScenarioParseResult parse_scenario(const std::string& text);

/// Canonical text form; parse_scenario(print_scenario(s)) reproduces s.
std::string print_scenario(const Scenario& s);

}  // namespace dyon

#endif
