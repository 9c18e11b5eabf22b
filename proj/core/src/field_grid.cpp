#include "dyon/field_grid.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "dyon/parallel.hpp"

namespace dyon {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Centered B-spline shapes; sum over integer shifts is 1.
double spline_weight(int order, double x) {
  const double a = std::fabs(x);
  if (order == 1) return a < 1.0 ? 1.0 - a : 0.0;
  // cubic
  if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
  if (a < 2.0) {
    const double t = 2.0 - a;
    return t * t * t / 6.0;
  }
  return 0.0;
}

int support_start(int order, double u) {
  return int(std::ceil(u - 0.5 * (order + 1)));
}

// Kahan-compensated sum over a fixed element order (deterministic).
double compensated_sum(const std::vector<double>& v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    const double y = x - comp;
    const double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace

FieldGrid::FieldGrid(const GridSpec& spec) : spec_(spec) {
  for (int a = 0; a < 3; ++a)
    if (spec_.n[a] < 4) throw std::invalid_argument("grid needs at least 4 cells per axis");
  if (spec_.h <= 0.0) throw std::invalid_argument("grid spacing must be positive");
  if (spec_.c <= 0.0) throw std::invalid_argument("light speed must be positive");
  const double cfl = spec_.h / (spec_.c * std::sqrt(3.0));
  if (!(std::fabs(spec_.dt) > 0.0) || std::fabs(spec_.dt) > cfl * (1.0 + 1e-12))
    throw std::invalid_argument("timestep violates stability bound dt <= h/(c*sqrt(3))");
  if (spec_.spline_order != 1 && spec_.spline_order != 3)
    throw std::invalid_argument("particle shape order must be 1 or 3");
  if (spec_.threads < 1) spec_.threads = 1;

  const std::size_t n = cells();
  for (int c = 0; c < 3; ++c) {
    e_[c].assign(n, 0.0);
    b_[c].assign(n, 0.0);
    j_e_[c].assign(n, 0.0);
    j_m_[c].assign(n, 0.0);
  }
  rho_e_.assign(n, 0.0);
  rho_m_.assign(n, 0.0);
}

std::size_t FieldGrid::index(int i, int j, int k) const {
  return (std::size_t(i) * spec_.n[1] + j) * spec_.n[2] + k;
}

namespace {

// Half-cell offsets (in units of h) of the stored components.
// Edge component c is offset along c; face component c along the other two.
Vec3 edge_offset(int comp) {
  Vec3 o;
  o[comp] = 0.5;
  return o;
}
Vec3 face_offset(int comp) {
  Vec3 o{0.5, 0.5, 0.5};
  o[comp] = 0.0;
  return o;
}

}  // namespace

Vec3 FieldGrid::e_position(int comp, int i, int j, int k) const {
  const Vec3 o = spec_.layout == GridLayout::e_edges_b_faces ? edge_offset(comp)
                                                             : face_offset(comp);
  return {(i + o.x) * spec_.h, (j + o.y) * spec_.h, (k + o.z) * spec_.h};
}

Vec3 FieldGrid::b_position(int comp, int i, int j, int k) const {
  const Vec3 o = spec_.layout == GridLayout::e_edges_b_faces ? face_offset(comp)
                                                             : edge_offset(comp);
  return {(i + o.x) * spec_.h, (j + o.y) * spec_.h, (k + o.z) * spec_.h};
}

void FieldGrid::fill(const std::function<FieldState(const Vec3&)>& field) {
  const auto [nx, ny, nz] = spec_.n;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const std::size_t at = index(i, j, k);
        for (int c = 0; c < 3; ++c) {
          e_[c][at] = field(e_position(c, i, j, k)).E[c];
          b_[c][at] = field(b_position(c, i, j, k)).B[c];
        }
      }
}

void FieldGrid::set_uniform(const Vec3& e0, const Vec3& b0) {
  for (int c = 0; c < 3; ++c) {
    std::fill(e_[c].begin(), e_[c].end(), e0[c]);
    std::fill(b_[c].begin(), b_[c].end(), b0[c]);
  }
}

void FieldGrid::clear_currents() {
  for (int c = 0; c < 3; ++c) {
    std::fill(j_e_[c].begin(), j_e_[c].end(), 0.0);
    std::fill(j_m_[c].begin(), j_m_[c].end(), 0.0);
  }
}

// Deposition lattices: the species whose charge pairs with the edge field
// lives on the primal nodes; the other species lives on the cell centers
// (offset 1/2, current stored with a +1 index shift along its axis).
void FieldGrid::deposit_static(double q, const Vec3& x, bool magnetic, double sign) {
  if (q == 0.0) return;
  const bool e_on_edges = spec_.layout == GridLayout::e_edges_b_faces;
  const bool on_nodes = magnetic ? !e_on_edges : e_on_edges;
  const double offset = on_nodes ? 0.0 : 0.5;
  std::vector<double>& rho = magnetic ? rho_m_ : rho_e_;

  const int order = spec_.spline_order;
  const int w = order + 1;
  const double inv_h3 = 1.0 / cell_volume();
  int base[3];
  double wgt[3][8];
  for (int a = 0; a < 3; ++a) {
    const double u = x[a] / spec_.h - offset;
    base[a] = support_start(order, u);
    for (int s = 0; s < w; ++s) wgt[a][s] = spline_weight(order, u - (base[a] + s));
  }
  for (int a = 0; a < w; ++a)
    for (int b = 0; b < w; ++b)
      for (int c = 0; c < w; ++c) {
        const double m = sign * q * inv_h3 * wgt[0][a] * wgt[1][b] * wgt[2][c];
        rho[index(wrap(base[0] + a, spec_.n[0]), wrap(base[1] + b, spec_.n[1]),
                  wrap(base[2] + c, spec_.n[2]))] += m;
      }
}

void FieldGrid::deposit_charge(double qe, double qm, const Vec3& x) {
  deposit_static(qe, x, false, 1.0);
  deposit_static(qm, x, true, 1.0);
}

void FieldGrid::remove_charge(double qe, double qm, const Vec3& x) {
  deposit_static(qe, x, false, -1.0);
  deposit_static(qm, x, true, -1.0);
}

void FieldGrid::deposit_current(double qe, double qm, const Vec3& x_old, const Vec3& x_new) {
  const bool e_on_edges = spec_.layout == GridLayout::e_edges_b_faces;

  const auto deposit_species = [&](double q, bool on_nodes, std::vector<double>& rho,
                                   std::array<std::vector<double>, 3>& jcur) {
    if (q == 0.0) return;
    const double offset = on_nodes ? 0.0 : 0.5;
    const int shift = on_nodes ? 0 : 1;
    const int order = spec_.spline_order;
    const int w = order + 2;  // window covering both endpoints
    const double h = spec_.h;

    int base[3];
    double s0[3][9], s1[3][9], ds[3][9];
    for (int a = 0; a < 3; ++a) {
      const double u0 = x_old[a] / h - offset;
      const double u1 = x_new[a] / h - offset;
      if (std::fabs(u1 - u0) >= 1.0)
        throw std::invalid_argument("deposition displacement exceeds one cell");
      base[a] = std::min(support_start(order, u0), support_start(order, u1));
      for (int s = 0; s < w; ++s) {
        s0[a][s] = spline_weight(order, u0 - (base[a] + s));
        s1[a][s] = spline_weight(order, u1 - (base[a] + s));
        ds[a][s] = s1[a][s] - s0[a][s];
      }
    }

    const double inv_h3 = 1.0 / cell_volume();
    const double jscale = -q / (h * h * spec_.dt);

    // Density decomposition: W sums telescope into the shape difference, so
    // the prefix-summed currents satisfy discrete continuity per deposit.
    for (int b = 0; b < w; ++b)
      for (int c = 0; c < w; ++c) {
        const int jb = wrap(base[1] + b, spec_.n[1]);
        const int kc = wrap(base[2] + c, spec_.n[2]);
        double acc = 0.0;
        for (int a = 0; a < w; ++a) {
          const double wx = ds[0][a] * (s0[1][b] * s0[2][c] + 0.5 * ds[1][b] * s0[2][c] +
                                        0.5 * s0[1][b] * ds[2][c] +
                                        ds[1][b] * ds[2][c] / 3.0);
          acc += wx;
          jcur[0][index(wrap(base[0] + a + shift, spec_.n[0]), jb, kc)] += jscale * acc;
        }
      }
    for (int a = 0; a < w; ++a)
      for (int c = 0; c < w; ++c) {
        const int ia = wrap(base[0] + a, spec_.n[0]);
        const int kc = wrap(base[2] + c, spec_.n[2]);
        double acc = 0.0;
        for (int b = 0; b < w; ++b) {
          const double wy = ds[1][b] * (s0[0][a] * s0[2][c] + 0.5 * ds[0][a] * s0[2][c] +
                                        0.5 * s0[0][a] * ds[2][c] +
                                        ds[0][a] * ds[2][c] / 3.0);
          acc += wy;
          jcur[1][index(ia, wrap(base[1] + b + shift, spec_.n[1]), kc)] += jscale * acc;
        }
      }
    for (int a = 0; a < w; ++a)
      for (int b = 0; b < w; ++b) {
        const int ia = wrap(base[0] + a, spec_.n[0]);
        const int jb = wrap(base[1] + b, spec_.n[1]);
        double acc = 0.0;
        for (int c = 0; c < w; ++c) {
          const double wz = ds[2][c] * (s0[0][a] * s0[1][b] + 0.5 * ds[0][a] * s0[1][b] +
                                        0.5 * s0[0][a] * ds[1][b] +
                                        ds[0][a] * ds[1][b] / 3.0);
          acc += wz;
          jcur[2][index(ia, jb, wrap(base[2] + c + shift, spec_.n[2]))] += jscale * acc;
        }
      }

    // Move the deposited charge with the same shape difference.
    for (int a = 0; a < w; ++a)
      for (int b = 0; b < w; ++b)
        for (int c = 0; c < w; ++c) {
          const double dm = q * inv_h3 * (s1[0][a] * s1[1][b] * s1[2][c] -
                                          s0[0][a] * s0[1][b] * s0[2][c]);
          rho[index(wrap(base[0] + a, spec_.n[0]), wrap(base[1] + b, spec_.n[1]),
                    wrap(base[2] + c, spec_.n[2]))] += dm;
        }
  };

  deposit_species(qe, e_on_edges, rho_e_, j_e_);
  deposit_species(qm, !e_on_edges, rho_m_, j_m_);
}

void FieldGrid::advance_face_half() {
  const bool e_on_edges = spec_.layout == GridLayout::e_edges_b_faces;
  auto& X = e_on_edges ? e_ : b_;
  auto& Y = e_on_edges ? b_ : e_;
  auto& jY = e_on_edges ? j_m_ : j_e_;
  const double s1 = e_on_edges ? 1.0 : -1.0;
  const double kc = -s1 * 0.5 * spec_.c * spec_.dt / spec_.h;  // s2 (c dt / 2h)
  const double kj = 0.5 * kFourPi * spec_.dt;

  const auto [nx, ny, nz] = spec_.n;
  parallel_slabs(nx, spec_.threads, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i) {
      const int ip = i + 1 == nx ? 0 : i + 1;
      for (int j = 0; j < ny; ++j) {
        const int jp = j + 1 == ny ? 0 : j + 1;
        for (int k = 0; k < nz; ++k) {
          const int kp = k + 1 == nz ? 0 : k + 1;
          const std::size_t at = index(i, j, k);
          const double cx = (X[2][index(i, jp, k)] - X[2][at]) - (X[1][index(i, j, kp)] - X[1][at]);
          const double cy = (X[0][index(i, j, kp)] - X[0][at]) - (X[2][index(ip, j, k)] - X[2][at]);
          const double cz = (X[1][index(ip, j, k)] - X[1][at]) - (X[0][index(i, jp, k)] - X[0][at]);
          Y[0][at] += kc * cx - kj * jY[0][at];
          Y[1][at] += kc * cy - kj * jY[1][at];
          Y[2][at] += kc * cz - kj * jY[2][at];
        }
      }
    }
  });
}

void FieldGrid::advance_edge_full() {
  const bool e_on_edges = spec_.layout == GridLayout::e_edges_b_faces;
  auto& X = e_on_edges ? e_ : b_;
  auto& Y = e_on_edges ? b_ : e_;
  auto& jX = e_on_edges ? j_e_ : j_m_;
  const double s1 = e_on_edges ? 1.0 : -1.0;
  const double kc = s1 * spec_.c * spec_.dt / spec_.h;
  const double kj = kFourPi * spec_.dt;

  const auto [nx, ny, nz] = spec_.n;
  parallel_slabs(nx, spec_.threads, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      for (int j = 0; j < ny; ++j) {
        const int jm = j == 0 ? ny - 1 : j - 1;
        for (int k = 0; k < nz; ++k) {
          const int km = k == 0 ? nz - 1 : k - 1;
          const std::size_t at = index(i, j, k);
          const double cx = (Y[2][at] - Y[2][index(i, jm, k)]) - (Y[1][at] - Y[1][index(i, j, km)]);
          const double cy = (Y[0][at] - Y[0][index(i, j, km)]) - (Y[2][at] - Y[2][index(im, j, k)]);
          const double cz = (Y[1][at] - Y[1][index(im, j, k)]) - (Y[0][at] - Y[0][index(i, jm, k)]);
          X[0][at] += kc * cx - kj * jX[0][at];
          X[1][at] += kc * cy - kj * jX[1][at];
          X[2][at] += kc * cz - kj * jX[2][at];
        }
      }
    }
  });
}

void FieldGrid::apply_damping() {
  const auto [nx, ny, nz] = spec_.n;
  const int wdt = spec_.damping_width;
  const double strength = spec_.damping;
  auto ramp = [&](int i, int n) {
    const int d = std::min(i, n - 1 - i);
    if (d >= wdt) return 1.0;
    const double s = double(wdt - d) / wdt;
    return 1.0 - strength * s * s;
  };
  for (int i = 0; i < nx; ++i) {
    const double fi = ramp(i, nx);
    for (int j = 0; j < ny; ++j) {
      const double fij = fi * ramp(j, ny);
      for (int k = 0; k < nz; ++k) {
        const double f = fij * ramp(k, nz);
        if (f == 1.0) continue;
        const std::size_t at = index(i, j, k);
        for (int c = 0; c < 3; ++c) {
          e_[c][at] *= f;
          b_[c][at] *= f;
        }
      }
    }
  }
}

void FieldGrid::step() {
  advance_face_half();
  advance_edge_full();
  advance_face_half();
  if (spec_.boundary == GridBoundary::damped) apply_damping();
  time_ += spec_.dt;
}

std::vector<double> FieldGrid::gauss_residual_electric() const {
  const bool on_nodes = spec_.layout == GridLayout::e_edges_b_faces;
  const auto [nx, ny, nz] = spec_.n;
  std::vector<double> res(cells());
  for (int i = 0; i < nx; ++i) {
    const int im = i == 0 ? nx - 1 : i - 1;
    const int ip = i + 1 == nx ? 0 : i + 1;
    for (int j = 0; j < ny; ++j) {
      const int jm = j == 0 ? ny - 1 : j - 1;
      const int jp = j + 1 == ny ? 0 : j + 1;
      for (int k = 0; k < nz; ++k) {
        const int km = k == 0 ? nz - 1 : k - 1;
        const int kp = k + 1 == nz ? 0 : k + 1;
        const std::size_t at = index(i, j, k);
        double div;
        if (on_nodes)
          div = (e_[0][at] - e_[0][index(im, j, k)] + e_[1][at] - e_[1][index(i, jm, k)] +
                 e_[2][at] - e_[2][index(i, j, km)]) / spec_.h;
        else
          div = (e_[0][index(ip, j, k)] - e_[0][at] + e_[1][index(i, jp, k)] - e_[1][at] +
                 e_[2][index(i, j, kp)] - e_[2][at]) / spec_.h;
        res[at] = div - kFourPi * rho_e_[at];
      }
    }
  }
  return res;
}

std::vector<double> FieldGrid::gauss_residual_magnetic() const {
  const bool on_cells = spec_.layout == GridLayout::e_edges_b_faces;
  const auto [nx, ny, nz] = spec_.n;
  std::vector<double> res(cells());
  for (int i = 0; i < nx; ++i) {
    const int im = i == 0 ? nx - 1 : i - 1;
    const int ip = i + 1 == nx ? 0 : i + 1;
    for (int j = 0; j < ny; ++j) {
      const int jm = j == 0 ? ny - 1 : j - 1;
      const int jp = j + 1 == ny ? 0 : j + 1;
      for (int k = 0; k < nz; ++k) {
        const int km = k == 0 ? nz - 1 : k - 1;
        const int kp = k + 1 == nz ? 0 : k + 1;
        const std::size_t at = index(i, j, k);
        double div;
        if (on_cells)
          div = (b_[0][index(ip, j, k)] - b_[0][at] + b_[1][index(i, jp, k)] - b_[1][at] +
                 b_[2][index(i, j, kp)] - b_[2][at]) / spec_.h;
        else
          div = (b_[0][at] - b_[0][index(im, j, k)] + b_[1][at] - b_[1][index(i, jm, k)] +
                 b_[2][at] - b_[2][index(i, j, km)]) / spec_.h;
        res[at] = div - kFourPi * rho_m_[at];
      }
    }
  }
  return res;
}

std::pair<double, double> FieldGrid::max_gauss_residuals() const {
  double re = 0.0, rm = 0.0;
  for (double v : gauss_residual_electric()) re = std::max(re, std::fabs(v));
  for (double v : gauss_residual_magnetic()) rm = std::max(rm, std::fabs(v));
  return {re, rm};
}

namespace {

// Conjugate gradient for the periodic 7-point Laplacian: solves
// -lap(phi) = rhs with rhs made mean-free by the caller.
std::vector<double> solve_poisson(const std::array<int, 3>& n, double h,
                                  const std::vector<double>& rhs) {
  const int nx = n[0], ny = n[1], nz = n[2];
  const std::size_t sz = rhs.size();
  const auto idx = [&](int i, int j, int k) { return (std::size_t(i) * ny + j) * nz + k; };

  const auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    const double inv_h2 = 1.0 / (h * h);
    for (int i = 0; i < nx; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      const int ip = i + 1 == nx ? 0 : i + 1;
      for (int j = 0; j < ny; ++j) {
        const int jm = j == 0 ? ny - 1 : j - 1;
        const int jp = j + 1 == ny ? 0 : j + 1;
        for (int k = 0; k < nz; ++k) {
          const int km = k == 0 ? nz - 1 : k - 1;
          const int kp = k + 1 == nz ? 0 : k + 1;
          const std::size_t at = idx(i, j, k);
          out[at] = inv_h2 * (6.0 * x[at] - x[idx(ip, j, k)] - x[idx(im, j, k)] -
                              x[idx(i, jp, k)] - x[idx(i, jm, k)] - x[idx(i, j, kp)] -
                              x[idx(i, j, km)]);
        }
      }
    }
  };

  const auto dot_v = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double y = a[i] * b[i] - comp;
      const double t = s + y;
      comp = (t - s) - y;
      s = t;
    }
    return s;
  };

  std::vector<double> x(sz, 0.0), r = rhs, p = rhs, ap(sz);
  double rr = dot_v(r, r);
  const double rhs_norm = std::sqrt(rr);
  if (rhs_norm == 0.0) return x;
  const double tol = 1e-14 * rhs_norm;
  const int max_iter = 20000;
  for (int it = 0; it < max_iter && std::sqrt(rr) > tol; ++it) {
    apply(p, ap);
    const double pap = dot_v(p, ap);
    if (pap <= 0.0) break;
    const double alpha = rr / pap;
    for (std::size_t m = 0; m < sz; ++m) {
      x[m] += alpha * p[m];
      r[m] -= alpha * ap[m];
    }
    const double rr_new = dot_v(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t m = 0; m < sz; ++m) p[m] = r[m] + beta * p[m];
  }
  return x;
}

}  // namespace

void FieldGrid::init_fields_from_charges(const Vec3& e_background, const Vec3& b_background) {
  const bool e_on_edges = spec_.layout == GridLayout::e_edges_b_faces;
  const auto [nx, ny, nz] = spec_.n;

  const auto gradient_field = [&](const std::vector<double>& rho, bool on_nodes,
                                  std::array<std::vector<double>, 3>& out) {
    std::vector<double> rhs(rho.size());
    double mean = 0.0;
    for (double v : rho) mean += v;
    mean /= double(rho.size());
    for (std::size_t m = 0; m < rho.size(); ++m) rhs[m] = kFourPi * (rho[m] - mean);
    const std::vector<double> phi = solve_poisson(spec_.n, spec_.h, rhs);

    for (int i = 0; i < nx; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      const int ip = i + 1 == nx ? 0 : i + 1;
      for (int j = 0; j < ny; ++j) {
        const int jm = j == 0 ? ny - 1 : j - 1;
        const int jp = j + 1 == ny ? 0 : j + 1;
        for (int k = 0; k < nz; ++k) {
          const int km = k == 0 ? nz - 1 : k - 1;
          const int kp = k + 1 == nz ? 0 : k + 1;
          const std::size_t at = index(i, j, k);
          if (on_nodes) {  // vector lives on outgoing edges: forward difference
            out[0][at] = -(phi[index(ip, j, k)] - phi[at]) / spec_.h;
            out[1][at] = -(phi[index(i, jp, k)] - phi[at]) / spec_.h;
            out[2][at] = -(phi[index(i, j, kp)] - phi[at]) / spec_.h;
          } else {  // cell-centered potential: faces take backward differences
            out[0][at] = -(phi[at] - phi[index(im, j, k)]) / spec_.h;
            out[1][at] = -(phi[at] - phi[index(i, jm, k)]) / spec_.h;
            out[2][at] = -(phi[at] - phi[index(i, j, km)]) / spec_.h;
          }
        }
      }
    }
  };

  gradient_field(rho_e_, e_on_edges, e_);
  gradient_field(rho_m_, !e_on_edges, b_);
  for (std::size_t m = 0; m < cells(); ++m) {
    for (int c = 0; c < 3; ++c) {
      e_[c][m] += e_background[c];
      b_[c][m] += b_background[c];
    }
  }
}

FieldState FieldGrid::gather(const Vec3& x) const {
  const int order = spec_.spline_order;
  const int w = order + 1;
  FieldState out;

  const auto interpolate = [&](const std::array<std::vector<double>, 3>& field,
                               bool on_edges) -> Vec3 {
    Vec3 value;
    for (int comp = 0; comp < 3; ++comp) {
      const Vec3 off = on_edges ? edge_offset(comp) : face_offset(comp);
      int base[3];
      double wgt[3][8];
      for (int a = 0; a < 3; ++a) {
        const double u = x[a] / spec_.h - off[a];
        base[a] = support_start(order, u);
        for (int s = 0; s < w; ++s) wgt[a][s] = spline_weight(order, u - (base[a] + s));
      }
      double acc = 0.0;
      for (int a = 0; a < w; ++a)
        for (int b = 0; b < w; ++b)
          for (int c = 0; c < w; ++c)
            acc += wgt[0][a] * wgt[1][b] * wgt[2][c] *
                   field[comp][index(wrap(base[0] + a, spec_.n[0]), wrap(base[1] + b, spec_.n[1]),
                                     wrap(base[2] + c, spec_.n[2]))];
      value[comp] = acc;
    }
    return value;
  };

  const bool e_on_edges = spec_.layout == GridLayout::e_edges_b_faces;
  out.E = interpolate(e_, e_on_edges);
  out.B = interpolate(b_, !e_on_edges);
  return out;
}

double FieldGrid::field_energy() const {
  std::vector<double> sq(cells() * 6);
  std::size_t at = 0;
  for (int c = 0; c < 3; ++c)
    for (double v : e_[c]) sq[at++] = v * v;
  for (int c = 0; c < 3; ++c)
    for (double v : b_[c]) sq[at++] = v * v;
  return compensated_sum(sq) / (8.0 * std::numbers::pi) * cell_volume();
}

Vec3 FieldGrid::field_momentum() const {
  const bool e_on_edges = spec_.layout == GridLayout::e_edges_b_faces;
  const auto [nx, ny, nz] = spec_.n;

  // Average each staggered component to the cell centers, then E x B.
  std::vector<double> px(cells()), py(cells()), pz(cells());
  const auto center_value = [&](const std::vector<double>& f, bool on_edges, int comp, int i,
                                int j, int k) {
    const int ip = i + 1 == nx ? 0 : i + 1;
    const int jp = j + 1 == ny ? 0 : j + 1;
    const int kp = k + 1 == nz ? 0 : k + 1;
    if (on_edges) {
      // offset along comp only: average over the other two axes.
      switch (comp) {
        case 0: return 0.25 * (f[index(i, j, k)] + f[index(i, jp, k)] + f[index(i, j, kp)] +
                               f[index(i, jp, kp)]);
        case 1: return 0.25 * (f[index(i, j, k)] + f[index(ip, j, k)] + f[index(i, j, kp)] +
                               f[index(ip, j, kp)]);
        default: return 0.25 * (f[index(i, j, k)] + f[index(ip, j, k)] + f[index(i, jp, k)] +
                                f[index(ip, jp, k)]);
      }
    }
    switch (comp) {
      case 0: return 0.5 * (f[index(i, j, k)] + f[index(ip, j, k)]);
      case 1: return 0.5 * (f[index(i, j, k)] + f[index(i, jp, k)]);
      default: return 0.5 * (f[index(i, j, k)] + f[index(i, j, kp)]);
    }
  };

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        Vec3 ec, bc;
        for (int c = 0; c < 3; ++c) {
          ec[c] = center_value(e_[c], e_on_edges, c, i, j, k);
          bc[c] = center_value(b_[c], !e_on_edges, c, i, j, k);
        }
        const Vec3 s = cross(ec, bc);
        const std::size_t at = index(i, j, k);
        px[at] = s.x;
        py[at] = s.y;
        pz[at] = s.z;
      }
  const double scale = cell_volume() / (kFourPi * spec_.c);
  return {compensated_sum(px) * scale, compensated_sum(py) * scale, compensated_sum(pz) * scale};
}

FieldGrid FieldGrid::duality_mapped() const {
  GridSpec spec = spec_;
  spec.layout = spec_.layout == GridLayout::e_edges_b_faces ? GridLayout::b_edges_e_faces
                                                            : GridLayout::e_edges_b_faces;
  FieldGrid out(spec);
  out.time_ = time_;
  for (int c = 0; c < 3; ++c) {
    out.e_[c] = b_[c];
    out.j_e_[c] = j_m_[c];
    for (std::size_t m = 0; m < cells(); ++m) {
      out.b_[c][m] = -e_[c][m];
      out.j_m_[c][m] = -j_e_[c][m];
    }
  }
  out.rho_e_ = rho_m_;
  out.rho_m_.resize(cells());
  for (std::size_t m = 0; m < cells(); ++m) out.rho_m_[m] = -rho_e_[m];
  return out;
}

void FieldGrid::dump(const std::string& path_base) const {
  std::ofstream bin(path_base + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open field dump " + path_base + ".bin");
  const auto write_array = [&](const std::vector<double>& v) {
    bin.write(reinterpret_cast<const char*>(v.data()),
              std::streamsize(v.size() * sizeof(double)));
  };
  for (int c = 0; c < 3; ++c) write_array(e_[c]);
  for (int c = 0; c < 3; ++c) write_array(b_[c]);
  write_array(rho_e_);
  write_array(rho_m_);
  if (!bin) throw std::runtime_error("short write on field dump " + path_base + ".bin");

  std::ofstream hdr(path_base + ".hdr");
  hdr << "dyon field dump\n";
  hdr << "layout = "
      << (spec_.layout == GridLayout::e_edges_b_faces ? "e_edges_b_faces" : "b_edges_e_faces")
      << "\n";
  hdr << "n = " << spec_.n[0] << " " << spec_.n[1] << " " << spec_.n[2] << "\n";
  hdr << "h = " << spec_.h << "\n";
  hdr << "dt = " << spec_.dt << "\n";
  hdr << "time = " << time_ << "\n";
  hdr << "c = " << spec_.c << "\n";
  hdr << "units = Gaussian\n";
  hdr << "arrays = Ex Ey Ez Bx By Bz rho_e rho_m\n";
  hdr << "dtype = float64 little-endian, index (i*ny + j)*nz + k\n";
  if (!hdr) throw std::runtime_error("cannot write sidecar header " + path_base + ".hdr");
}

}  // namespace dyon
