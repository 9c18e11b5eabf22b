#ifndef DYON_FIELD_GRID_HPP
#define DYON_FIELD_GRID_HPP

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dyon/field_state.hpp"
#include "dyon/vec3.hpp"

namespace dyon {

enum class GridBoundary { periodic, damped };

/// Which field lives on the edge lattice. The mirrored layout is the discrete
/// image of the electric/magnetic exchange symmetry: mapping
/// (E,B) -> (B,-E), (j_e,j_m) -> (j_m,-j_e) and flipping the layout commutes
/// bitwise with step().
enum class GridLayout { e_edges_b_faces, b_edges_e_faces };

struct GridSpec {
  std::array<int, 3> n{8, 8, 8};
  double h = 1.0;
  double dt = 0.1;
  double c = 1.0;
  GridBoundary boundary = GridBoundary::periodic;
  GridLayout layout = GridLayout::e_edges_b_faces;
  int spline_order = 3;  ///< particle shape: 1 = linear, 3 = cubic (radius 2h)
  int threads = 1;
  double damping = 0.02;
  int damping_width = 8;
};

/// Staggered samples of E and B on a periodic lattice plus dual
/// charge/current deposition buffers. Leapfrog update keeps both discrete
/// Gauss laws exact identities; dt must satisfy dt <= h / (c sqrt(3)).
class FieldGrid {
 public:
  explicit FieldGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  std::size_t cells() const { return std::size_t(spec_.n[0]) * spec_.n[1] * spec_.n[2]; }
  double cell_volume() const { return spec_.h * spec_.h * spec_.h; }
  Vec3 box_extent() const {
    return {spec_.n[0] * spec_.h, spec_.n[1] * spec_.h, spec_.n[2] * spec_.h};
  }

  std::size_t index(int i, int j, int k) const;

  // Stored component arrays (component 0..2 = x..z).
  const std::vector<double>& e_component(int comp) const { return e_[comp]; }
  const std::vector<double>& b_component(int comp) const { return b_[comp]; }
  const std::vector<double>& rho_electric() const { return rho_e_; }
  const std::vector<double>& rho_magnetic() const { return rho_m_; }
  const std::vector<double>& j_electric(int comp) const { return j_e_[comp]; }
  const std::vector<double>& j_magnetic(int comp) const { return j_m_[comp]; }

  double& e_at(int comp, int i, int j, int k) { return e_[comp][index(i, j, k)]; }
  double& b_at(int comp, int i, int j, int k) { return b_[comp][index(i, j, k)]; }
  double e_at(int comp, int i, int j, int k) const { return e_[comp][index(i, j, k)]; }
  double b_at(int comp, int i, int j, int k) const { return b_[comp][index(i, j, k)]; }

  /// Physical sample positions of the staggered components (layout-aware).
  Vec3 e_position(int comp, int i, int j, int k) const;
  Vec3 b_position(int comp, int i, int j, int k) const;

  /// Sample an analytic field at the staggered positions (overwrites E, B).
  void fill(const std::function<FieldState(const Vec3&)>& field);
  void set_uniform(const Vec3& e0, const Vec3& b0);

  /// Deposition. Charges use the configured spline shape; currents use the
  /// charge-conserving density decomposition of the same shape, so the
  /// discrete continuity equations hold per deposit. Displacements must stay
  /// under one cell per step (guaranteed below the CFL bound for v < c).
  void clear_currents();
  void deposit_charge(double qe, double qm, const Vec3& x);
  void remove_charge(double qe, double qm, const Vec3& x);
  void deposit_current(double qe, double qm, const Vec3& x_old, const Vec3& x_new);

  /// One leapfrog step with the currently deposited currents:
  /// half-advance of the face field, full advance of the edge field,
  /// half-advance of the face field. Time-reversible in vacuum.
  void step();

  /// Negate the timestep; stepping then exactly inverts the palindromic
  /// update (vacuum), up to roundoff.
  void reverse_time() { spec_.dt = -spec_.dt; }

  /// (div E - 4 pi rho_e, div B - 4 pi rho_m) max-norms over the lattice.
  std::pair<double, double> max_gauss_residuals() const;
  /// Residual fields on their natural lattices.
  std::vector<double> gauss_residual_electric() const;
  std::vector<double> gauss_residual_magnetic() const;

  /// Solve the two discrete Poisson problems for the deposited charges and
  /// set E, B to the resulting gradient fields plus uniform backgrounds.
  /// Both Gauss residuals come out at solver tolerance (mean charge is
  /// neutralized per lattice, as required on a periodic box).
  void init_fields_from_charges(const Vec3& e_background = {}, const Vec3& b_background = {});

  /// Spline-interpolated field at a position (same shape as deposition).
  FieldState gather(const Vec3& x) const;

  /// Diagnostics: total energy sum((E^2+B^2)/8pi) h^3 and momentum
  /// sum(E x B)/(4 pi c) h^3 with components averaged to cell centers.
  double field_energy() const;
  Vec3 field_momentum() const;

  /// The duality image: (E,B) -> (B,-E), sources (j_e, j_m) -> (j_m, -j_e),
  /// layout flipped. step() commutes with this map bitwise.
  FieldGrid duality_mapped() const;

  /// Flat binary dump (one float64 array per component) plus a text sidecar
  /// `<base>.hdr` describing dimensions, spacing, time and units.
  void dump(const std::string& path_base) const;

 private:
  void advance_face_half();
  void advance_edge_full();
  void apply_damping();
  void deposit_static(double q, const Vec3& x, bool magnetic, double sign);

  GridSpec spec_;
  double time_ = 0.0;
  std::array<std::vector<double>, 3> e_;
  std::array<std::vector<double>, 3> b_;
  std::vector<double> rho_e_;  // node lattice in the default layout
  std::vector<double> rho_m_;  // cell lattice in the default layout
  std::array<std::vector<double>, 3> j_e_;
  std::array<std::vector<double>, 3> j_m_;
};

}  // namespace dyon

#endif
