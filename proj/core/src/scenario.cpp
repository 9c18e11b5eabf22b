#include "dyon/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dyon {

namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "mode", "c", "seed", "dt", "steps", "cadence", "threads",
      "field.preset", "field.e", "field.b",
      "field.amplitude", "field.wavevector", "field.polarization",
      "field.dyon.qe", "field.dyon.qm", "field.dyon.position",
      "grid.n", "grid.h", "grid.boundary", "grid.shape-order", "grid.self-field",
      "grid.init-blob", "particle",
      "output.records", "output.summary", "output.dump", "output.dump-cadence"};
  return keys;
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = int(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = int(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest_key(const std::string& key) {
  int best = 1 << 30;
  std::string out;
  for (const auto& k : known_keys()) {
    const int d = edit_distance(key, k);
    if (d < best) {
      best = d;
      out = k;
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out) {
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(s.data(), last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z); }

}  // namespace

ScenarioParseResult parse_scenario(const std::string& text) {
  Scenario s;
  std::vector<std::string> errors;
  const auto fail = [&](const std::string& msg) { errors.push_back(msg); };

  std::istringstream stream(text);
  std::string raw;
  int lineno = 0;

  const auto want_double = [&](const std::string& key, const std::string& v, double& out) {
    if (!parse_double(v, out)) fail(key + ": expected a finite number, got '" + v + "'");
  };
  const auto want_vec3 = [&](const std::string& key, const std::string& v, Vec3& out) {
    const auto toks = split_ws(v);
    double a, b, c;
    if (toks.size() != 3 || !parse_double(toks[0], a) || !parse_double(toks[1], b) ||
        !parse_double(toks[2], c)) {
      fail(key + ": expected three numbers, got '" + v + "'");
      return;
    }
    out = {a, b, c};
  };
  const auto want_long = [&](const std::string& key, const std::string& v, long& out) {
    if (!parse_long(v, out)) fail(key + ": expected an integer, got '" + v + "'");
  };

  while (std::getline(stream, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail("line " + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) {
      fail(key + ": empty value");
      continue;
    }

    if (key == "mode") {
      if (value == "analytic-fields")
        s.mode = RunMode::analytic_fields;
      else if (value == "grid-evolution")
        s.mode = RunMode::grid_evolution;
      else if (value == "identity-suite")
        s.mode = RunMode::identity_suite;
      else
        fail("mode: expected analytic-fields | grid-evolution | identity-suite, got '" + value +
             "'");
    } else if (key == "c") {
      want_double(key, value, s.c);
    } else if (key == "seed") {
      long v = 0;
      want_long(key, value, v);
      s.seed = std::uint64_t(v);
    } else if (key == "dt") {
      want_double(key, value, s.dt);
    } else if (key == "steps") {
      want_long(key, value, s.steps);
    } else if (key == "cadence") {
      want_long(key, value, s.cadence);
    } else if (key == "threads") {
      long v = 1;
      want_long(key, value, v);
      s.threads = int(v);
    } else if (key == "field.preset") {
      if (value == "uniform")
        s.preset = FieldPreset::uniform;
      else if (value == "plane-wave")
        s.preset = FieldPreset::plane_wave;
      else if (value == "point-dyon")
        s.preset = FieldPreset::point_dyon;
      else if (value == "grid-init")
        s.preset = FieldPreset::grid_init;
      else
        fail("field.preset: expected uniform | plane-wave | point-dyon | grid-init, got '" +
             value + "'");
    } else if (key == "field.e") {
      want_vec3(key, value, s.e0);
    } else if (key == "field.b") {
      want_vec3(key, value, s.b0);
    } else if (key == "field.amplitude") {
      want_double(key, value, s.wave_amplitude);
    } else if (key == "field.wavevector") {
      want_vec3(key, value, s.wave_k);
    } else if (key == "field.polarization") {
      want_vec3(key, value, s.wave_polarization);
    } else if (key == "field.dyon.qe") {
      want_double(key, value, s.dyon_qe);
    } else if (key == "field.dyon.qm") {
      want_double(key, value, s.dyon_qm);
    } else if (key == "field.dyon.position") {
      want_vec3(key, value, s.dyon_position);
    } else if (key == "grid.n") {
      const auto toks = split_ws(value);
      long a, b, c;
      if (toks.size() != 3 || !parse_long(toks[0], a) || !parse_long(toks[1], b) ||
          !parse_long(toks[2], c))
        fail("grid.n: expected three integers, got '" + value + "'");
      else
        s.grid_n = {int(a), int(b), int(c)};
    } else if (key == "grid.h") {
      want_double(key, value, s.grid_h);
    } else if (key == "grid.boundary") {
      if (value == "periodic")
        s.boundary = GridBoundary::periodic;
      else if (value == "damped")
        s.boundary = GridBoundary::damped;
      else
        fail("grid.boundary: expected periodic | damped, got '" + value + "'");
    } else if (key == "grid.shape-order") {
      long v = 3;
      want_long(key, value, v);
      s.shape_order = int(v);
    } else if (key == "grid.self-field") {
      if (value == "on")
        s.self_field = true;
      else if (value == "off")
        s.self_field = false;
      else
        fail("grid.self-field: expected on | off, got '" + value + "'");
    } else if (key == "grid.init-blob") {
      const auto toks = split_ws(value);
      BlobSpec blob;
      double q, x, y, z;
      if (toks.size() != 5 || (toks[0] != "e" && toks[0] != "m") || !parse_double(toks[1], q) ||
          !parse_double(toks[2], x) || !parse_double(toks[3], y) || !parse_double(toks[4], z)) {
        fail("grid.init-blob: expected 'e|m charge cx cy cz', got '" + value + "'");
      } else {
        blob.magnetic = toks[0] == "m";
        blob.q = q;
        blob.center = {x, y, z};
        s.blobs.push_back(blob);
      }
    } else if (key == "particle") {
      const auto toks = split_ws(value);
      double v[9];
      bool ok = toks.size() == 9;
      for (int i = 0; ok && i < 9; ++i) ok = parse_double(toks[i], v[i]);
      if (!ok) {
        fail("particle: expected 'm0 qe qm x y z vx vy vz', got '" + value + "'");
      } else {
        ParticleSpec p;
        p.m0 = v[0];
        p.qe = v[1];
        p.qm = v[2];
        p.x0 = {v[3], v[4], v[5]};
        p.v0 = {v[6], v[7], v[8]};
        s.particles.push_back(p);
      }
    } else if (key == "output.records") {
      s.records_path = value;
    } else if (key == "output.summary") {
      s.summary_path = value;
    } else if (key == "output.dump") {
      s.dump_base = value;
    } else if (key == "output.dump-cadence") {
      want_long(key, value, s.dump_cadence);
    } else {
      fail("unknown key '" + key + "' (did you mean '" + nearest_key(key) + "'?)");
    }
  }

  // Cross-field constraints; every violation names the invariant it breaks.
  if (!(s.c > 0.0) || !std::isfinite(s.c)) fail("c: light speed must be positive and finite");
  if (s.mode != RunMode::identity_suite) {
    if (!(s.dt > 0.0)) fail("dt: timestep must be positive");
    if (s.steps < 0) fail("steps: must be non-negative");
    if (s.cadence < 1) fail("cadence: must be at least 1");
  }
  if (s.threads < 1) fail("threads: must be at least 1");
  for (std::size_t i = 0; i < s.particles.size(); ++i) {
    const auto& p = s.particles[i];
    const std::string tag = "particle " + std::to_string(i + 1);
    if (!(p.m0 > 0.0)) fail(tag + ": rest mass must satisfy m0 > 0");
    if (!(dot(p.v0, p.v0) < s.c * s.c)) fail(tag + ": speed must satisfy |v0| < c");
  }
  if (s.mode == RunMode::grid_evolution) {
    if (!(s.grid_h > 0.0)) fail("grid.h: spacing must be positive in grid mode");
    for (int a = 0; a < 3; ++a)
      if (s.grid_n[a] < 4) fail("grid.n: needs at least 4 cells per axis");
    if (s.grid_h > 0.0 && s.dt > 0.0) {
      const double cfl = s.grid_h / (s.c * std::sqrt(3.0));
      if (s.dt > cfl * (1.0 + 1e-12))
        fail("dt: violates the stability bound dt <= h/(c*sqrt(3)) (max " + fmt(cfl) + ")");
    }
    if (s.shape_order != 1 && s.shape_order != 3)
      fail("grid.shape-order: particle shape order must be 1 or 3");
    if (s.preset == FieldPreset::point_dyon)
      fail("field.preset: point-dyon is analytic-only; use grid.init-blob in grid mode");
    if (s.preset == FieldPreset::plane_wave)
      for (const auto& p : s.particles)
        if (p.qe != 0.0 || p.qm != 0.0)
          fail("field.preset: plane-wave grid runs support only chargeless tracer particles");
  } else {
    if (!s.blobs.empty()) fail("grid.init-blob: only meaningful with mode = grid-evolution");
  }
  if (s.preset == FieldPreset::plane_wave) {
    if (!(norm(s.wave_k) > 0.0)) fail("field.wavevector: must be non-zero for plane-wave");
    if (!(s.wave_amplitude != 0.0)) fail("field.amplitude: must be non-zero for plane-wave");
    if (norm(s.wave_k) > 0.0 && norm(s.wave_polarization) > 0.0 &&
        std::fabs(dot(s.wave_k, s.wave_polarization)) >
            1e-12 * norm(s.wave_k) * norm(s.wave_polarization))
      fail("field.polarization: must be orthogonal to field.wavevector");
  }

  ScenarioParseResult out;
  out.errors = std::move(errors);
  if (out.errors.empty()) out.scenario = std::move(s);
  return out;
}

std::string print_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "mode = "
     << (s.mode == RunMode::analytic_fields
             ? "analytic-fields"
             : s.mode == RunMode::grid_evolution ? "grid-evolution" : "identity-suite")
     << "\n";
  os << "c = " << fmt(s.c) << "\n";
  os << "seed = " << s.seed << "\n";
  os << "dt = " << fmt(s.dt) << "\n";
  os << "steps = " << s.steps << "\n";
  os << "cadence = " << s.cadence << "\n";
  os << "threads = " << s.threads << "\n";
  os << "field.preset = "
     << (s.preset == FieldPreset::uniform
             ? "uniform"
             : s.preset == FieldPreset::plane_wave
                   ? "plane-wave"
                   : s.preset == FieldPreset::point_dyon ? "point-dyon" : "grid-init")
     << "\n";
  os << "field.e = " << fmt(s.e0) << "\n";
  os << "field.b = " << fmt(s.b0) << "\n";
  os << "field.amplitude = " << fmt(s.wave_amplitude) << "\n";
  os << "field.wavevector = " << fmt(s.wave_k) << "\n";
  os << "field.polarization = " << fmt(s.wave_polarization) << "\n";
  os << "field.dyon.qe = " << fmt(s.dyon_qe) << "\n";
  os << "field.dyon.qm = " << fmt(s.dyon_qm) << "\n";
  os << "field.dyon.position = " << fmt(s.dyon_position) << "\n";
  os << "grid.n = " << s.grid_n[0] << " " << s.grid_n[1] << " " << s.grid_n[2] << "\n";
  if (s.grid_h > 0.0) os << "grid.h = " << fmt(s.grid_h) << "\n";
  os << "grid.boundary = " << (s.boundary == GridBoundary::periodic ? "periodic" : "damped")
     << "\n";
  os << "grid.shape-order = " << s.shape_order << "\n";
  os << "grid.self-field = " << (s.self_field ? "on" : "off") << "\n";
  for (const auto& b : s.blobs)
    os << "grid.init-blob = " << (b.magnetic ? "m" : "e") << " " << fmt(b.q) << " "
       << fmt(b.center) << "\n";
  for (const auto& p : s.particles)
    os << "particle = " << fmt(p.m0) << " " << fmt(p.qe) << " " << fmt(p.qm) << " " << fmt(p.x0)
       << " " << fmt(p.v0) << "\n";
  os << "output.records = " << s.records_path << "\n";
  os << "output.summary = " << s.summary_path << "\n";
  if (!s.dump_base.empty()) os << "output.dump = " << s.dump_base << "\n";
  os << "output.dump-cadence = " << s.dump_cadence << "\n";
  return os.str();
}

}  // namespace dyon
