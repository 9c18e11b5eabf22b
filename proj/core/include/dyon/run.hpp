#ifndef DYON_RUN_HPP
#define DYON_RUN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyon/scenario.hpp"
#include "dyon/vec3.hpp"

namespace dyon {

struct ParticleRecord {
  Vec3 x;
  Vec3 v;
  double gamma = 1.0;
  double kinetic_energy = 0.0;
  Vec3 momentum;
};

/// One diagnostic row (written as newline-delimited JSON).
struct RunRecord {
  long step = 0;
  double time = 0.0;
  std::vector<ParticleRecord> particles;
  bool has_field = false;
  double gauss_residual_electric = 0.0;
  double gauss_residual_magnetic = 0.0;
  double field_energy = 0.0;
  Vec3 field_momentum;
};

/// Conservation metrics over a record stream plus the discretization-error
/// estimate the drifts are compared against.
struct RunSummary {
  long steps = 0;
  double final_time = 0.0;
  double max_gauss_residual_electric = 0.0;
  double max_gauss_residual_magnetic = 0.0;
  double initial_total_energy = 0.0;
  double final_total_energy = 0.0;
  double energy_drift = 0.0;
  double momentum_drift = 0.0;
  double energy_drift_bound = 0.0;    // kappa * energy scale (grid runs)
  double momentum_drift_bound = 0.0;  // kappa * momentum scale (grid runs)
  double kappa = 0.0;                 // (h/L)^2 + (c dt/L)^2
  std::optional<double> gyroradius_estimate;
  std::optional<double> gyroradius_expected;

  std::string to_text() const;
};

struct ReportContext {
  double c = 1.0;
  double dt = 0.0;
  double h = 0.0;       // 0 for analytic runs
  double extent = 0.0;  // shortest box extent, 0 for analytic runs
  Vec3 gyro_axis;       // effective rotation field direction (zero to skip)
  double gyro_expected = 0.0;
};

/// Reduce a record stream to the summary; throws on an empty stream.
RunSummary emit_report(const std::vector<RunRecord>& records, const ReportContext& context);

struct RunOptions {
  std::string output_dir;             // prefix for all output paths
  std::optional<std::uint64_t> seed;  // overrides scenario seed
  std::optional<int> threads;         // overrides scenario threads
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 validation/io error, 2 numerical abort
  std::string message;
  std::vector<RunRecord> records;
  std::optional<RunSummary> summary;
};

/// Execute a scenario: evolve, write records/dumps/summary, and report.
/// Identical scenario and seed give bitwise identical outputs regardless of
/// the thread count.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace dyon

#endif
