#include "dyon/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "dyon/dynamics.hpp"
#include "dyon/field_grid.hpp"
#include "dyon/field_state.hpp"
#include "dyon/tensor_algebra.hpp"

namespace dyon {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_vec(const Vec3& v) {
  return "[" + fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z) + "]";
}

std::string record_line(const RunRecord& r) {
  std::ostringstream os;
  os << "{\"step\":" << r.step << ",\"time\":" << fmt(r.time) << ",\"particles\":[";
  for (std::size_t i = 0; i < r.particles.size(); ++i) {
    const auto& p = r.particles[i];
    if (i) os << ",";
    os << "{\"x\":" << json_vec(p.x) << ",\"v\":" << json_vec(p.v)
       << ",\"gamma\":" << fmt(p.gamma) << ",\"ke\":" << fmt(p.kinetic_energy)
       << ",\"p\":" << json_vec(p.momentum) << "}";
  }
  os << "]";
  if (r.has_field) {
    os << ",\"field\":{\"gauss_e\":" << fmt(r.gauss_residual_electric)
       << ",\"gauss_m\":" << fmt(r.gauss_residual_magnetic)
       << ",\"energy\":" << fmt(r.field_energy)
       << ",\"momentum\":" << json_vec(r.field_momentum) << "}";
  }
  os << "}";
  return os.str();
}

std::function<FieldState(const Event&)> preset_field(const Scenario& s) {
  switch (s.preset) {
    case FieldPreset::uniform: {
      const FieldState f{s.e0, s.b0};
      return [f](const Event&) { return f; };
    }
    case FieldPreset::plane_wave: {
      const double c = s.c;
      const Vec3 k = s.wave_k;
      const double kn = norm(k);
      const Vec3 khat = k / kn;
      const Vec3 pol = s.wave_polarization / norm(s.wave_polarization);
      const double amp = s.wave_amplitude;
      const double omega = c * kn;
      return [=](const Event& e) {
        const double phase = dot(k, e.r) - omega * e.t;
        const Vec3 ef = amp * std::cos(phase) * pol;
        return FieldState{ef, cross(khat, ef)};
      };
    }
    case FieldPreset::point_dyon: {
      const Vec3 r0 = s.dyon_position;
      const double qe = s.dyon_qe;
      const double qm = s.dyon_qm;
      return [=](const Event& e) {
        const Vec3 rel = e.r - r0;
        const double r2 = dot(rel, rel);
        const double inv = 1.0 / (r2 * std::sqrt(r2));
        return FieldState{qe * inv * rel, qm * inv * rel};
      };
    }
    case FieldPreset::grid_init:
      break;
  }
  return [](const Event&) { return FieldState{}; };
}

// Half-step velocity rewind: the leapfrog stores u at t - dt/2.
DyonState rewind_velocity(const DyonState& d, const FieldState& f, double dt, double c) {
  const auto frozen = [f](const Event&) { return f; };
  DyonState back = push_dyon(d, frozen, -0.5 * dt, 0.0, c);
  back.x = d.x;
  return back;
}

ParticleRecord particle_record(const DyonState& d, double c) {
  ParticleRecord pr;
  pr.x = d.x;
  pr.v = d.velocity(c);
  pr.gamma = d.gamma(c);
  pr.kinetic_energy = d.kinetic_energy(c);
  pr.momentum = d.momentum();
  return pr;
}

bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

struct UniformRng {
  std::mt19937_64 gen;
  explicit UniformRng(std::uint64_t seed) : gen(seed) {}
  // in [-1, 1); bit-stable across standard libraries
  double sym() { return 2.0 * ((gen() >> 11) * 0x1.0p-53) - 1.0; }
  Vec3 vec() { return {sym(), sym(), sym()}; }
};

int run_identity_suite(std::uint64_t seed, std::ostream& summary) {
  long failures = 0;

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const auto [lhs, rhs] = epsilon_contraction_check(i, j, k, l);
          if (lhs != rhs) ++failures;
          const auto [lhs2, rhs2] = epsilon_delta_check(i, j, k, l);
          if (lhs2 != rhs2) ++failures;
        }
  summary << "epsilon_contraction_tuples = 256\n";

  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int i = 0; i < 4; ++i)
        for (int r = 0; r < 4; ++r)
          for (int sdx = 0; sdx < 4; ++sdx)
            for (int k = 0; k < 4; ++k) {
              const auto [lhs, rhs] = delta3_check(p, q, i, r, sdx, k);
              if (lhs != rhs) ++failures;
            }
  summary << "delta3_tuples = 4096\n";

  UniformRng rng(seed);
  const int trials = 1000;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const FieldState f{rng.vec(), rng.vec()};
    const auto [lhs, rhs] = dual_product_identity(f);
    const double scale = std::max(1.0, std::max(max_abs(lhs), max_abs(rhs)));
    worst = std::max(worst, max_abs_diff(lhs, rhs) / scale);

    const Mat4 t1 = stress_energy(f).t_mixed;
    const Mat4 t2 = stress_energy_symmetrized(f).t_mixed;
    const double tscale = std::max(1.0, max_abs(t1));
    worst = std::max(worst, max_abs_diff(t1, t2) / tscale);
    worst = std::max(worst, std::fabs(stress_energy(f).trace()) / tscale);

    const Mat4 raised = stress_energy(f).raised();
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        worst = std::max(worst, std::fabs(raised[i][k] - raised[k][i]) / tscale);

    if (!(hodge_dual(hodge_dual(f)) == FieldState{-f.E, -f.B})) ++failures;
    const auto inv = invariant_scalars(f);
    if (inv.ff != -inv.gg) ++failures;
  }
  if (worst > 1e-12) ++failures;
  summary << "random_field_trials = " << trials << "\n";
  summary << "max_relative_error = " << fmt(worst) << "\n";
  summary << "identity_suite = " << (failures == 0 ? "pass" : "FAIL") << "\n";
  return failures == 0 ? 0 : 2;
}

struct GyroInfo {
  Vec3 axis;
  double expected = 0.0;
};

GyroInfo gyro_info(const Scenario& s) {
  GyroInfo out;
  if (s.particles.size() != 1 || s.preset != FieldPreset::uniform) return out;
  const auto& p = s.particles[0];
  const Vec3 beff = p.qe * s.b0 - p.qm * s.e0;  // rotation field, charge folded in
  const double bn = norm(beff);
  if (bn == 0.0) return out;
  out.axis = beff / bn;
  const double gamma = 1.0 / std::sqrt(1.0 - dot(p.v0, p.v0) / (s.c * s.c));
  const Vec3 vperp = p.v0 - dot(p.v0, out.axis) * out.axis;
  out.expected = gamma * p.m0 * norm(vperp) * s.c / bn;
  return out;
}

}  // namespace

RunSummary emit_report(const std::vector<RunRecord>& records, const ReportContext& ctx) {
  if (records.empty()) throw std::invalid_argument("emit_report needs a non-empty record stream");

  RunSummary sum;
  sum.steps = records.back().step;
  sum.final_time = records.back().time;

  const auto total_energy = [](const RunRecord& r) {
    double e = r.field_energy;
    for (const auto& p : r.particles) e += p.kinetic_energy;
    return e;
  };
  const auto total_momentum = [](const RunRecord& r) {
    Vec3 p = r.field_momentum;
    for (const auto& q : r.particles) p += q.momentum;
    return p;
  };

  const double e0 = total_energy(records.front());
  const Vec3 p0 = total_momentum(records.front());
  sum.initial_total_energy = e0;
  sum.final_total_energy = total_energy(records.back());

  double escale = std::fabs(e0), pscale = 0.0;
  for (const auto& r : records) {
    sum.max_gauss_residual_electric =
        std::max(sum.max_gauss_residual_electric, r.gauss_residual_electric);
    sum.max_gauss_residual_magnetic =
        std::max(sum.max_gauss_residual_magnetic, r.gauss_residual_magnetic);
    sum.energy_drift = std::max(sum.energy_drift, std::fabs(total_energy(r) - e0));
    sum.momentum_drift = std::max(sum.momentum_drift, norm(total_momentum(r) - p0));
    escale = std::max(escale, std::fabs(total_energy(r)));
    double pmag = norm(r.field_momentum);
    for (const auto& q : r.particles) pmag += norm(q.momentum);
    pscale = std::max(pscale, pmag);
  }

  if (ctx.h > 0.0 && ctx.extent > 0.0) {
    const double hh = ctx.h / ctx.extent;
    const double tt = ctx.c * ctx.dt / ctx.extent;
    sum.kappa = hh * hh + tt * tt;
    sum.energy_drift_bound = sum.kappa * escale;
    sum.momentum_drift_bound = sum.kappa * pscale;
  }

  if (norm(ctx.gyro_axis) > 0.0 && records.front().particles.size() == 1 &&
      records.size() >= 8) {
    const Vec3 n = ctx.gyro_axis / norm(ctx.gyro_axis);
    const std::size_t start = records.size() / 2;
    Vec3 center;
    std::size_t count = 0;
    for (std::size_t i = start; i < records.size(); ++i) {
      const Vec3 x = records[i].particles[0].x;
      center += x - dot(x, n) * n;
      ++count;
    }
    center = center / double(count);
    double radius = 0.0;
    for (std::size_t i = start; i < records.size(); ++i) {
      const Vec3 x = records[i].particles[0].x;
      radius += norm(x - dot(x, n) * n - center);
    }
    sum.gyroradius_estimate = radius / double(count);
    if (ctx.gyro_expected > 0.0) sum.gyroradius_expected = ctx.gyro_expected;
  }

  return sum;
}

std::string RunSummary::to_text() const {
  std::ostringstream os;
  os << "dyon run summary\n";
  os << "steps = " << steps << "\n";
  os << "final_time = " << fmt(final_time) << "\n";
  os << "max_gauss_residual_electric = " << fmt(max_gauss_residual_electric) << "\n";
  os << "max_gauss_residual_magnetic = " << fmt(max_gauss_residual_magnetic) << "\n";
  os << "initial_total_energy = " << fmt(initial_total_energy) << "\n";
  os << "final_total_energy = " << fmt(final_total_energy) << "\n";
  os << "energy_drift = " << fmt(energy_drift) << "\n";
  os << "momentum_drift = " << fmt(momentum_drift) << "\n";
  os << "discretization_kappa = " << fmt(kappa) << "\n";
  os << "energy_drift_bound = " << fmt(energy_drift_bound) << "\n";
  os << "momentum_drift_bound = " << fmt(momentum_drift_bound) << "\n";
  if (gyroradius_estimate) os << "gyroradius_estimate = " << fmt(*gyroradius_estimate) << "\n";
  if (gyroradius_expected) os << "gyroradius_expected = " << fmt(*gyroradius_expected) << "\n";
  return os.str();
}

RunResult run(const Scenario& scenario_in, const RunOptions& options) {
  Scenario s = scenario_in;
  if (options.seed) s.seed = *options.seed;
  if (options.threads) s.threads = *options.threads;

  RunResult result;
  const auto out_path = [&](const std::string& rel) {
    if (options.output_dir.empty()) return rel;
    return options.output_dir + "/" + rel;
  };

  try {
    if (!options.output_dir.empty())
      std::filesystem::create_directories(options.output_dir);

    if (s.mode == RunMode::identity_suite) {
      std::ostringstream body;
      const int code = run_identity_suite(s.seed, body);
      std::ofstream summary(out_path(s.summary_path));
      if (!summary) throw std::ios_base::failure("cannot open " + out_path(s.summary_path));
      summary << body.str();
      result.exit_code = code;
      result.message = code == 0 ? "identity suite passed" : "identity suite FAILED";
      return result;
    }

    std::ofstream records_file(out_path(s.records_path));
    if (!records_file) throw std::ios_base::failure("cannot open " + out_path(s.records_path));

    const double c = s.c;
    const double dt = s.dt;

    std::vector<DyonState> particles;
    particles.reserve(s.particles.size());
    for (const auto& p : s.particles)
      particles.push_back(DyonState::make(p.m0, p.qe, p.qm, p.x0, p.v0, c));

    const bool grid_mode = s.mode == RunMode::grid_evolution;
    std::unique_ptr<FieldGrid> grid;
    std::vector<std::unique_ptr<FieldGrid>> self_grids(particles.size());
    std::function<FieldState(const Event&)> analytic = preset_field(s);

    if (grid_mode) {
      GridSpec spec;
      spec.n = s.grid_n;
      spec.h = s.grid_h;
      spec.dt = dt;
      spec.c = c;
      spec.boundary = s.boundary;
      spec.spline_order = s.shape_order;
      spec.threads = s.threads;
      grid = std::make_unique<FieldGrid>(spec);

      if (s.preset == FieldPreset::plane_wave) {
        const auto wave = preset_field(s);
        grid->fill([&](const Vec3& r) { return wave(Event{0.0, r}); });
      } else {
        for (const auto& blob : s.blobs)
          grid->deposit_charge(blob.magnetic ? 0.0 : blob.q, blob.magnetic ? blob.q : 0.0,
                               blob.center);
        for (const auto& p : particles) grid->deposit_charge(p.qe, p.qm, p.x);
        const bool any_charge = !s.blobs.empty() ||
                                std::any_of(particles.begin(), particles.end(), [](const auto& p) {
                                  return p.qe != 0.0 || p.qm != 0.0;
                                });
        if (any_charge)
          grid->init_fields_from_charges(s.e0, s.b0);
        else
          grid->set_uniform(s.e0, s.b0);
      }

      if (s.self_field) {
        for (std::size_t i = 0; i < particles.size(); ++i) {
          if (particles[i].qe == 0.0 && particles[i].qm == 0.0) continue;
          self_grids[i] = std::make_unique<FieldGrid>(spec);
          self_grids[i]->deposit_charge(particles[i].qe, particles[i].qm, particles[i].x);
          self_grids[i]->init_fields_from_charges();
        }
      }
    }

    const auto field_seen_by = [&](std::size_t i, double t) -> FieldState {
      if (!grid_mode) return analytic(Event{t, particles[i].x});
      FieldState f = grid->gather(particles[i].x);
      if (self_grids[i]) {
        const FieldState self = self_grids[i]->gather(particles[i].x);
        f = f - self;
      }
      return f;
    };

    // Leapfrog staggering: velocities rewound to t = -dt/2.
    for (std::size_t i = 0; i < particles.size(); ++i)
      particles[i] = rewind_velocity(particles[i], field_seen_by(i, 0.0), dt, c);

    const auto make_record = [&](long step, double t) {
      RunRecord r;
      r.step = step;
      r.time = t;
      for (const auto& p : particles) r.particles.push_back(particle_record(p, c));
      if (grid_mode) {
        r.has_field = true;
        const auto [ge, gm] = grid->max_gauss_residuals();
        r.gauss_residual_electric = ge;
        r.gauss_residual_magnetic = gm;
        r.field_energy = grid->field_energy();
        r.field_momentum = grid->field_momentum();
      }
      return r;
    };

    const auto emit = [&](const RunRecord& r) {
      result.records.push_back(r);
      records_file << record_line(r) << "\n";
    };

    emit(make_record(0, 0.0));

    for (long step = 1; step <= s.steps; ++step) {
      const double t = (step - 1) * dt;
      if (grid_mode) {
        grid->clear_currents();
        for (auto& sg : self_grids)
          if (sg) sg->clear_currents();
      }
      for (std::size_t i = 0; i < particles.size(); ++i) {
        const FieldState f = field_seen_by(i, t);
        const auto frozen = [f](const Event&) { return f; };
        const Vec3 x_old = particles[i].x;
        particles[i] = push_dyon(particles[i], frozen, dt, t, c);
        if (grid_mode && (particles[i].qe != 0.0 || particles[i].qm != 0.0)) {
          grid->deposit_current(particles[i].qe, particles[i].qm, x_old, particles[i].x);
          if (self_grids[i])
            self_grids[i]->deposit_current(particles[i].qe, particles[i].qm, x_old,
                                           particles[i].x);
        }
      }
      if (grid_mode) {
        grid->step();
        for (auto& sg : self_grids)
          if (sg) sg->step();
      }

      for (const auto& p : particles)
        if (!finite(p.x) || !std::isfinite(p.u[0]) || !finite(p.u.spatial())) {
          result.exit_code = 2;
          result.message = "numerical abort: non-finite particle state at step " +
                           std::to_string(step);
          return result;
        }

      if (step % s.cadence == 0 || step == s.steps) {
        const RunRecord r = make_record(step, step * dt);
        if (r.has_field && !std::isfinite(r.field_energy)) {
          result.exit_code = 2;
          result.message = "numerical abort: non-finite field energy at step " +
                           std::to_string(step);
          return result;
        }
        emit(r);
      }
      if (grid_mode && s.dump_cadence > 0 && step % s.dump_cadence == 0) {
        char tag[32];
        std::snprintf(tag, sizeof(tag), "_%06ld", step);
        grid->dump(out_path(s.dump_base.empty() ? "fields" + std::string(tag)
                                                : s.dump_base + tag));
      }
    }

    if (grid_mode && !s.dump_base.empty()) grid->dump(out_path(s.dump_base));
    if (!records_file) throw std::ios_base::failure("write failure on records file");

    ReportContext ctx;
    ctx.c = c;
    ctx.dt = dt;
    if (grid_mode) {
      ctx.h = s.grid_h;
      const Vec3 ext = grid->box_extent();
      ctx.extent = std::min({ext.x, ext.y, ext.z});
    }
    const GyroInfo gy = gyro_info(s);
    ctx.gyro_axis = gy.axis;
    ctx.gyro_expected = gy.expected;
    result.summary = emit_report(result.records, ctx);

    std::ofstream summary(out_path(s.summary_path));
    if (!summary) throw std::ios_base::failure("cannot open " + out_path(s.summary_path));
    summary << result.summary->to_text();
    if (!summary) throw std::ios_base::failure("write failure on summary file");

    result.message = "ok";
    return result;
  } catch (const std::ios_base::failure& io) {
    result.exit_code = 1;
    result.message = std::string("i/o error: ") + io.what();
    return result;
  } catch (const std::exception& ex) {
    result.exit_code = 1;
    result.message = ex.what();
    return result;
  }
}

}  // namespace dyon
