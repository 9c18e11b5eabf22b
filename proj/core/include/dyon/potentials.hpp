#ifndef DYON_POTENTIALS_HPP
#define DYON_POTENTIALS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dyon/event.hpp"
#include "dyon/field_state.hpp"
#include "dyon/finite_diff.hpp"
#include "dyon/minkowski.hpp"
#include "dyon/tensor_algebra.hpp"

namespace dyon {

/// Contravariant four-potential value A^i = (V, vector part) at an event.
using PotentialFn = std::function<FourVector(const Event&)>;

/// Coordinate-derivative closure: J[j][i] = d_j A^i with d_0 = (1/c) d/dt and
/// d_1..3 the spatial partials. Row index is the (lower) derivative index.
using PotentialJacobianFn = std::function<Mat4(const Event&)>;

/// One analytic four-potential: a value closure plus an optional exact
/// jacobian closure. Without the jacobian, derivatives fall back to adaptive
/// central differences of the value closure.
struct AnalyticPotential {
  PotentialFn value;
  PotentialJacobianFn jacobian;  // may be empty
};

/// Uniform spacetime sampling: nt*nx*ny*nz nodes, node (it,ix,iy,iz) at
/// t = t0 + it*dt, r = origin + (ix*dx, iy*dy, iz*dz). Spacings > 0.
struct GridSampling {
  double t0 = 0.0;
  Vec3 origin;
  double dt = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  int nt = 0, nx = 0, ny = 0, nz = 0;

  friend bool operator==(const GridSampling&, const GridSampling&) = default;
  std::size_t node_count() const {
    return std::size_t(nt) * std::size_t(nx) * std::size_t(ny) * std::size_t(nz);
  }
  double spacing(int axis) const {
    return axis == 0 ? dt : (axis == 1 ? dx : (axis == 2 ? dy : dz));
  }
  int extent(int axis) const {
    return axis == 0 ? nt : (axis == 1 ? nx : (axis == 2 ? ny : nz));
  }
};

/// Gauge scalar fields (psi, psi') with optional exact four-gradient
/// g[j] = d_j psi and symmetric second-derivative closures H[i][j] = d_i d_j psi.
/// With the exact closures, gauge invariance of the fields is exact in
/// floating point; otherwise the derivatives are centered differences.
struct GaugeScalars {
  std::function<double(const Event&)> psi;
  std::function<double(const Event&)> psi_prime;
  std::function<FourVector(const Event&)> grad_psi;            // optional
  std::function<FourVector(const Event&)> grad_psi_prime;      // optional
  std::function<Mat4(const Event&)> hessian_psi;               // optional
  std::function<Mat4(const Event&)> hessian_psi_prime;         // optional
  std::optional<GridSampling> sampling;  ///< set when pre-sampled; must match the pair's grid
};

/// The two four-potentials (V, A) and (V', C), either analytic closures or a
/// shared uniform grid of samples. Immutable after construction; queries are
/// pure and safe to run concurrently.
class PotentialPair {
 public:
  static PotentialPair analytic(AnalyticPotential a, AnalyticPotential c,
                                double light_speed = 1.0, FdScales scales = {});

  /// Sample an analytic pair onto a grid (used by solvers and refinement tests).
  static PotentialPair sampled(const PotentialPair& source, const GridSampling& grid);

  bool is_grid() const { return grid_.has_value(); }
  double light_speed() const { return c_; }
  const GridSampling& sampling() const;
  const FdScales& fd_scales() const { return scales_; }

  /// Step for outer central differences of field values along an event axis:
  /// the grid spacing in grid mode, the adaptive analytic step otherwise.
  double derivative_step(int axis, const Event& e) const;

  /// A^i and C^i values.
  FourVector a_at(const Event& e) const;
  FourVector c_at(const Event& e) const;

  /// Coordinate jacobians d_j A^i / d_j C^i (second-order accurate on grids).
  Mat4 a_jacobian(const Event& e) const;
  Mat4 c_jacobian(const Event& e) const;

  /// (E, B) from the vector relations
  ///   E = -curl C - (1/c) dA/dt - grad V,
  ///   B =  curl A - (1/c) dC/dt - grad V'.
  FieldState fields_at(const Event& e) const;

  /// (F^{ik}, G^{ik}) assembled through the index route
  ///   F = delta-part(A) - epsilon-part(C), G = delta-part(C) + epsilon-part(A);
  /// agrees entrywise with fields_at for every input.
  std::pair<Mat4, Mat4> field_tensors_at(const Event& e) const;

  /// Gauge-condition residuals (d_i A^i, d_i C^i); zero in Lorenz gauge.
  std::pair<double, double> lorenz_residuals(const Event& e) const;

  /// A -> A - grad^i psi, C -> C - grad^i psi' (spatial parts gain +grad).
  /// Leaves fields_at unchanged (exactly, given exact gauge derivatives).
  PotentialPair apply_gauge(const GaugeScalars& g) const;

 private:
  PotentialPair() = default;

  struct GridData {
    GridSampling grid;
    // A^0..A^3, C^0..C^3 per node, fastest index is the component.
    std::vector<double> samples;
  };

  void require_interior(const Event& e, int margin) const;
  Mat4 jacobian_of(bool use_c, const Event& e) const;
  FourVector value_of(bool use_c, const Event& e) const;
  Mat4 grid_jacobian_at_node(bool use_c, int it, int ix, int iy, int iz) const;
  FourVector node_value(bool use_c, int it, int ix, int iy, int iz) const;

  AnalyticPotential a_;
  AnalyticPotential c_pot_;
  std::shared_ptr<const GridData> grid_data_;
  std::optional<GridSampling> grid_;
  double c_ = 1.0;
  FdScales scales_;
};

/// Assemble (E, B) from jacobians alone; shared by PotentialPair and tests.
FieldState fields_from_jacobians(const Mat4& ja, const Mat4& jc);

}  // namespace dyon

#endif
