#include "dyon/potentials.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dyon {

namespace {

// d^i = sign(i) d_i: raising the derivative (or any vector) index.
constexpr double raise_sign(int i) { return i == 0 ? 1.0 : -1.0; }

Mat4 fd_jacobian(const PotentialFn& value, const FdScales& scales, double c, const Event& e) {
  Mat4 j;
  for (int axis = 0; axis < 4; ++axis) {
    const double h = scales.step(axis, e);
    FourVector d = central_difference(value, e, axis, h);
    const double unit = (axis == 0) ? 1.0 / c : 1.0;  // x^0 = c t
    for (int i = 0; i < 4; ++i) j[axis][i] = unit * d[i];
  }
  return j;
}

Mat4 analytic_jacobian(const AnalyticPotential& p, const FdScales& scales, double c,
                       const Event& e) {
  if (p.jacobian) return p.jacobian(e);
  return fd_jacobian(p.value, scales, c, e);
}

FourVector gauge_gradient(const std::function<double(const Event&)>& value,
                          const std::function<FourVector(const Event&)>& grad,
                          const FdScales& scales, double c, const Event& e) {
  if (grad) return grad(e);
  FourVector g;
  for (int axis = 0; axis < 4; ++axis) {
    const double h = scales.step(axis, e);
    const double unit = (axis == 0) ? 1.0 / c : 1.0;
    g[axis] = unit * central_difference(value, e, axis, h);
  }
  return g;
}

Mat4 gauge_hessian(const std::function<double(const Event&)>& value,
                   const std::function<FourVector(const Event&)>& grad,
                   const std::function<Mat4(const Event&)>& hess, const FdScales& scales,
                   double c, const Event& e) {
  if (hess) return hess(e);
  Mat4 h;
  auto grad_at = [&](const Event& ev) { return gauge_gradient(value, grad, scales, c, ev); };
  for (int axis = 0; axis < 4; ++axis) {
    const double step = scales.step(axis, e);
    const double unit = (axis == 0) ? 1.0 / c : 1.0;
    FourVector d = central_difference(grad_at, e, axis, step);
    for (int i = 0; i < 4; ++i) h[axis][i] = unit * d[i];
  }
  // Enforce symmetry so the gauge terms cancel in the field assembly.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double s = 0.5 * (h[i][j] + h[j][i]);
      h[i][j] = s;
      h[j][i] = s;
    }
  return h;
}

}  // namespace

FieldState fields_from_jacobians(const Mat4& ja, const Mat4& jc) {
  FieldState f;
  f.E.x = -(jc[2][3] - jc[3][2]) - ja[0][1] - ja[1][0];
  f.E.y = -(jc[3][1] - jc[1][3]) - ja[0][2] - ja[2][0];
  f.E.z = -(jc[1][2] - jc[2][1]) - ja[0][3] - ja[3][0];
  f.B.x = (ja[2][3] - ja[3][2]) - jc[0][1] - jc[1][0];
  f.B.y = (ja[3][1] - ja[1][3]) - jc[0][2] - jc[2][0];
  f.B.z = (ja[1][2] - ja[2][1]) - jc[0][3] - jc[3][0];
  return f;
}

PotentialPair PotentialPair::analytic(AnalyticPotential a, AnalyticPotential c,
                                      double light_speed, FdScales scales) {
  if (!a.value || !c.value) throw std::invalid_argument("analytic potential needs value closures");
  if (light_speed <= 0.0) throw std::invalid_argument("light speed must be positive");
  PotentialPair p;
  p.a_ = std::move(a);
  p.c_pot_ = std::move(c);
  p.c_ = light_speed;
  p.scales_ = scales;
  return p;
}

PotentialPair PotentialPair::sampled(const PotentialPair& source, const GridSampling& grid) {
  if (grid.dt <= 0.0 || grid.dx <= 0.0 || grid.dy <= 0.0 || grid.dz <= 0.0)
    throw std::invalid_argument("grid spacings must be strictly positive");
  if (grid.nt < 3 || grid.nx < 3 || grid.ny < 3 || grid.nz < 3)
    throw std::invalid_argument("grid needs at least 3 nodes per axis for central stencils");

  auto data = std::make_shared<GridData>();
  data->grid = grid;
  data->samples.resize(grid.node_count() * 8);
  std::size_t at = 0;
  for (int it = 0; it < grid.nt; ++it)
    for (int ix = 0; ix < grid.nx; ++ix)
      for (int iy = 0; iy < grid.ny; ++iy)
        for (int iz = 0; iz < grid.nz; ++iz) {
          const Event e{grid.t0 + it * grid.dt,
                        {grid.origin.x + ix * grid.dx, grid.origin.y + iy * grid.dy,
                         grid.origin.z + iz * grid.dz}};
          const FourVector a = source.a_at(e);
          const FourVector c = source.c_at(e);
          for (int i = 0; i < 4; ++i) data->samples[at + i] = a[i];
          for (int i = 0; i < 4; ++i) data->samples[at + 4 + i] = c[i];
          at += 8;
        }

  PotentialPair p;
  p.grid_data_ = std::move(data);
  p.grid_ = grid;
  p.c_ = source.c_;
  p.scales_ = source.scales_;
  return p;
}

const GridSampling& PotentialPair::sampling() const {
  if (!grid_) throw std::logic_error("potential pair is analytic, no sampling");
  return *grid_;
}

double PotentialPair::derivative_step(int axis, const Event& e) const {
  if (grid_) return grid_->spacing(axis);
  return scales_.step(axis, e);
}

void PotentialPair::require_interior(const Event& e, int margin) const {
  if (!grid_) return;
  const GridSampling& g = *grid_;
  const double coord[4] = {e.t, e.r.x, e.r.y, e.r.z};
  const double start[4] = {g.t0, g.origin.x, g.origin.y, g.origin.z};
  for (int axis = 0; axis < 4; ++axis) {
    const double u = (coord[axis] - start[axis]) / g.spacing(axis);
    const double lo = margin - 1e-9;
    const double hi = g.extent(axis) - 1 - margin + 1e-9;
    if (!(u >= lo && u <= hi))
      throw std::domain_error("event outside sampled domain (axis " + std::to_string(axis) +
                              ", needs " + std::to_string(margin) + "-cell margin)");
  }
}

FourVector PotentialPair::node_value(bool use_c, int it, int ix, int iy, int iz) const {
  const GridSampling& g = grid_data_->grid;
  const std::size_t base =
      (((std::size_t(it) * g.nx + ix) * g.ny + iy) * g.nz + iz) * 8 + (use_c ? 4 : 0);
  const double* s = grid_data_->samples.data() + base;
  return {s[0], s[1], s[2], s[3]};
}

Mat4 PotentialPair::grid_jacobian_at_node(bool use_c, int it, int ix, int iy, int iz) const {
  const GridSampling& g = grid_data_->grid;
  Mat4 j;
  const int node[4] = {it, ix, iy, iz};
  for (int axis = 0; axis < 4; ++axis) {
    int p[4] = {node[0], node[1], node[2], node[3]};
    int m[4] = {node[0], node[1], node[2], node[3]};
    ++p[axis];
    --m[axis];
    const FourVector fp = node_value(use_c, p[0], p[1], p[2], p[3]);
    const FourVector fm = node_value(use_c, m[0], m[1], m[2], m[3]);
    double denom = 2.0 * g.spacing(axis);
    if (axis == 0) denom *= c_;  // x^0 = c t
    for (int i = 0; i < 4; ++i) j[axis][i] = (fp[i] - fm[i]) / denom;
  }
  return j;
}

namespace {

struct CellLocator {
  int base[4];
  double frac[4];
};

CellLocator locate(const GridSampling& g, const Event& e) {
  CellLocator loc{};
  const double coord[4] = {e.t, e.r.x, e.r.y, e.r.z};
  const double start[4] = {g.t0, g.origin.x, g.origin.y, g.origin.z};
  for (int axis = 0; axis < 4; ++axis) {
    const double u = (coord[axis] - start[axis]) / g.spacing(axis);
    double fl = std::floor(u);
    double f = u - fl;
    // Snap to nodes; collapses the interpolation stencil on that axis.
    if (f < 1e-9) f = 0.0;
    if (f > 1.0 - 1e-9) {
      fl += 1.0;
      f = 0.0;
    }
    loc.base[axis] = int(fl);
    loc.frac[axis] = f;
  }
  return loc;
}

}  // namespace

FourVector PotentialPair::value_of(bool use_c, const Event& e) const {
  if (!grid_) return use_c ? c_pot_.value(e) : a_.value(e);
  require_interior(e, 0);
  const CellLocator loc = locate(grid_data_->grid, e);
  FourVector out;
  for (int ct = 0; ct < 2; ++ct)
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy)
        for (int cz = 0; cz < 2; ++cz) {
          const double w = (ct ? loc.frac[0] : 1.0 - loc.frac[0]) *
                           (cx ? loc.frac[1] : 1.0 - loc.frac[1]) *
                           (cy ? loc.frac[2] : 1.0 - loc.frac[2]) *
                           (cz ? loc.frac[3] : 1.0 - loc.frac[3]);
          if (w == 0.0) continue;
          const FourVector v = node_value(use_c, loc.base[0] + ct, loc.base[1] + cx,
                                          loc.base[2] + cy, loc.base[3] + cz);
          for (int i = 0; i < 4; ++i) out[i] += w * v[i];
        }
  return out;
}

Mat4 PotentialPair::jacobian_of(bool use_c, const Event& e) const {
  if (!grid_) return analytic_jacobian(use_c ? c_pot_ : a_, scales_, c_, e);
  require_interior(e, 1);
  const CellLocator loc = locate(grid_data_->grid, e);
  Mat4 out;
  for (int ct = 0; ct < 2; ++ct)
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy)
        for (int cz = 0; cz < 2; ++cz) {
          const double w = (ct ? loc.frac[0] : 1.0 - loc.frac[0]) *
                           (cx ? loc.frac[1] : 1.0 - loc.frac[1]) *
                           (cy ? loc.frac[2] : 1.0 - loc.frac[2]) *
                           (cz ? loc.frac[3] : 1.0 - loc.frac[3]);
          if (w == 0.0) continue;
          const Mat4 j = grid_jacobian_at_node(use_c, loc.base[0] + ct, loc.base[1] + cx,
                                               loc.base[2] + cy, loc.base[3] + cz);
          for (int r = 0; r < 4; ++r)
            for (int i = 0; i < 4; ++i) out[r][i] += w * j[r][i];
        }
  return out;
}

FourVector PotentialPair::a_at(const Event& e) const { return value_of(false, e); }
FourVector PotentialPair::c_at(const Event& e) const { return value_of(true, e); }
Mat4 PotentialPair::a_jacobian(const Event& e) const { return jacobian_of(false, e); }
Mat4 PotentialPair::c_jacobian(const Event& e) const { return jacobian_of(true, e); }

FieldState PotentialPair::fields_at(const Event& e) const {
  return fields_from_jacobians(a_jacobian(e), c_jacobian(e));
}

std::pair<Mat4, Mat4> PotentialPair::field_tensors_at(const Event& e) const {
  const Mat4 ja = a_jacobian(e);
  const Mat4 jc = c_jacobian(e);
  Mat4 f, g;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double eps_c = 0.0, eps_a = 0.0;
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
          const int eps = epsilon_upper(i, k, p, q);
          if (eps == 0) continue;
          eps_c += eps * raise_sign(q) * jc[p][q];  // eps^{ikpq} d_p C_q
          eps_a += eps * raise_sign(q) * ja[p][q];
        }
      f[i][k] = raise_sign(i) * ja[i][k] - raise_sign(k) * ja[k][i] - eps_c;
      g[i][k] = raise_sign(i) * jc[i][k] - raise_sign(k) * jc[k][i] + eps_a;
    }
  return {f, g};
}

std::pair<double, double> PotentialPair::lorenz_residuals(const Event& e) const {
  const Mat4 ja = a_jacobian(e);
  const Mat4 jc = c_jacobian(e);
  return {ja[0][0] + ja[1][1] + ja[2][2] + ja[3][3],
          jc[0][0] + jc[1][1] + jc[2][2] + jc[3][3]};
}

PotentialPair PotentialPair::apply_gauge(const GaugeScalars& g) const {
  if (!g.psi || !g.psi_prime)
    throw std::invalid_argument("gauge scalars need psi and psi' closures");

  if (grid_) {
    if (g.sampling && !(*g.sampling == *grid_))
      throw std::invalid_argument("gauge scalars sampled on a different grid (shape mismatch)");
    const GridSampling& gs = *grid_;
    auto data = std::make_shared<GridData>();
    data->grid = gs;
    data->samples = grid_data_->samples;
    std::size_t at = 0;
    for (int it = 0; it < gs.nt; ++it)
      for (int ix = 0; ix < gs.nx; ++ix)
        for (int iy = 0; iy < gs.ny; ++iy)
          for (int iz = 0; iz < gs.nz; ++iz) {
            const Event e{gs.t0 + it * gs.dt,
                          {gs.origin.x + ix * gs.dx, gs.origin.y + iy * gs.dy,
                           gs.origin.z + iz * gs.dz}};
            const FourVector dpsi = gauge_gradient(g.psi, g.grad_psi, scales_, c_, e);
            const FourVector dpsi_p =
                gauge_gradient(g.psi_prime, g.grad_psi_prime, scales_, c_, e);
            for (int i = 0; i < 4; ++i) {
              data->samples[at + i] -= raise_sign(i) * dpsi[i];
              data->samples[at + 4 + i] -= raise_sign(i) * dpsi_p[i];
            }
            at += 8;
          }
    PotentialPair out;
    out.grid_data_ = std::move(data);
    out.grid_ = grid_;
    out.c_ = c_;
    out.scales_ = scales_;
    return out;
  }

  const double c = c_;
  const FdScales scales = scales_;

  auto make_gauged = [&](const AnalyticPotential& base,
                         std::function<double(const Event&)> psi,
                         std::function<FourVector(const Event&)> grad,
                         std::function<Mat4(const Event&)> hess) {
    AnalyticPotential out;
    out.value = [base, psi, grad, scales, c](const Event& e) {
      const FourVector d = gauge_gradient(psi, grad, scales, c, e);
      FourVector v = base.value(e);
      for (int i = 0; i < 4; ++i) v[i] -= raise_sign(i) * d[i];
      return v;
    };
    out.jacobian = [base, psi, grad, hess, scales, c](const Event& e) {
      Mat4 j = analytic_jacobian(base, scales, c, e);
      const Mat4 h = gauge_hessian(psi, grad, hess, scales, c, e);
      for (int r = 0; r < 4; ++r)
        for (int i = 0; i < 4; ++i) j[r][i] -= raise_sign(i) * h[r][i];
      return j;
    };
    return out;
  };

  PotentialPair out;
  out.a_ = make_gauged(a_, g.psi, g.grad_psi, g.hessian_psi);
  out.c_pot_ = make_gauged(c_pot_, g.psi_prime, g.grad_psi_prime, g.hessian_psi_prime);
  out.c_ = c_;
  out.scales_ = scales_;
  return out;
}

}  // namespace dyon
