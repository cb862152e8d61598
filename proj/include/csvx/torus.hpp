#pragma once

// Periodic geometry on the flat torus R^2 / (Z e1 + Z e2): uniform nodal
// grids in lattice coordinates, spectral Laplacian and Poisson inverse,
// the periodic Green's function and the exponential-form vortex backgrounds.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace csvx {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

class TorusLattice {
 public:
  /// Throws Error(InvalidArgument) if e1, e2 are (numerically) dependent.
  TorusLattice(Vec2 e1, Vec2 e2);

  static TorusLattice unit_square() { return {{1.0, 0.0}, {0.0, 1.0}}; }

  Vec2 e1() const noexcept { return e1_; }
  Vec2 e2() const noexcept { return e2_; }
  double area() const noexcept { return area_; }

  /// Dual basis, b_i . e_j = delta_ij.
  Vec2 dual1() const noexcept { return b1_; }
  Vec2 dual2() const noexcept { return b2_; }

  Vec2 to_cartesian(double s1, double s2) const noexcept;

  /// Euclidean distance of the displacement ds (lattice coordinates) to the
  /// nearest lattice translate.
  double min_image_distance(double ds1, double ds2) const noexcept;

  double shortest_vector() const noexcept { return shortest_; }

 private:
  Vec2 e1_, e2_, b1_, b2_;
  double area_;
  double shortest_;
};

class TorusGrid;
using GridPtr = std::shared_ptr<const TorusGrid>;

/// n1 x n2 nodes x_ij = (i/n1) e1 + (j/n2) e2, stored row-major (index i*n2 + j).
class TorusGrid {
 public:
  /// n1, n2 even and >= 16.
  static GridPtr create(const TorusLattice& lattice, int n1, int n2);
  ~TorusGrid();

  TorusGrid(const TorusGrid&) = delete;
  TorusGrid& operator=(const TorusGrid&) = delete;

  const TorusLattice& lattice() const noexcept { return lattice_; }
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n1_) * n2_; }
  double area() const noexcept { return lattice_.area(); }
  /// Uniform quadrature weight |Omega| / (n1 n2).
  double weight() const noexcept { return weight_; }
  double spacing() const noexcept;

  double s1(int i) const noexcept { return static_cast<double>(i) / n1_; }
  double s2(int j) const noexcept { return static_cast<double>(j) / n2_; }

  /// Same dimensions and lattice.
  bool compatible(const TorusGrid& other) const noexcept;

  // Spectral layer. Modes follow the r2c layout n1 x (n2/2 + 1).
  std::size_t modes() const noexcept { return static_cast<std::size_t>(n1_) * (n2_ / 2 + 1); }
  /// |k|^2 per mode for k = 2 pi (k1 b1 + k2 b2); the cross term is dropped on
  /// Nyquist rows/columns so the operator stays real and self-adjoint.
  std::span<const double> wavenumber_sq() const noexcept { return k2_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Normalized: backward(forward(f)) == f.
  void backward(std::span<const std::complex<double>> in, std::span<double> out) const;

  void laplacian(std::span<const double> in, std::span<double> out) const;
  /// Inverse Laplacian on the mean-zero subspace; the zero mode is discarded.
  void inverse_laplacian(std::span<const double> in, std::span<double> out) const;
  /// Multiplies every mode by exp(-t |k|^2).
  void heat_smooth(std::span<const double> in, std::span<double> out, double t) const;

  double integrate(std::span<const double> f) const;
  double mean(std::span<const double> f) const;
  /// Quadrature inner product int f g.
  double inner(std::span<const double> f, std::span<const double> g) const;

 private:
  TorusGrid(const TorusLattice& lattice, int n1, int n2);

  struct Plans;
  TorusLattice lattice_;
  int n1_, n2_;
  double weight_;
  std::vector<double> k2_;
  std::unique_ptr<Plans> plans_;
};

/// Nodal samples of a periodic function on a grid.
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid, bool mean_zero = false);
  ScalarField(GridPtr grid, std::vector<double> values, bool mean_zero = false);

  const TorusGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double at(int i, int j) const noexcept { return values_[static_cast<std::size_t>(i) * grid_->n2() + j]; }

  /// A tag only; see project_mean_zero.
  bool mean_zero() const noexcept { return mean_zero_; }

  double integral() const { return grid_->integrate(values_); }
  double mean() const { return grid_->mean(values_); }
  double max_abs() const noexcept;
  double max() const noexcept;
  double min() const noexcept;
  /// sqrt(int f^2)
  double l2_norm() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s) noexcept;
  ScalarField& operator+=(double s) noexcept;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  bool mean_zero_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Throws Error(GridMismatch) unless both fields live on compatible grids.
void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Subtracts the quadrature mean and sets the tag.
ScalarField project_mean_zero(ScalarField f);

ScalarField laplacian(const ScalarField& f);

/// Solves Laplacian(u) = f with mean(u) = 0. Throws Error(NonZeroMean) when
/// |mean(f)| > 1e-8 max|f|.
ScalarField poisson_solve(const ScalarField& f);

/// A vortex at lattice coordinates s in [0,1)^2 with positive multiplicity.
struct Vortex {
  double s1 = 0.0;
  double s2 = 0.0;
  int multiplicity = 1;

  bool operator==(const Vortex&) const = default;
};

class VortexSet {
 public:
  VortexSet() = default;
  /// Reduces positions modulo the lattice; throws on multiplicity < 1.
  explicit VortexSet(std::vector<Vortex> points);

  const std::vector<Vortex>& points() const noexcept { return points_; }
  int total() const noexcept;
  bool empty() const noexcept { return points_.empty(); }

 private:
  std::vector<Vortex> points_;
};

/// Smooth radial cutoff: 1 on [0, inner], 0 beyond outer, C-infinity in between.
class Cutoff {
 public:
  Cutoff(double inner, double outer);
  /// Default radii for a lattice: outer = 0.25 |shortest lattice vector|.
  static Cutoff for_lattice(const TorusLattice& lattice);

  double inner() const noexcept { return inner_; }
  double outer() const noexcept { return outer_; }
  double value(double r) const noexcept;
  double derivative(double r) const noexcept;
  double second_derivative(double r) const noexcept;
  /// int_{R^2} (1/2pi) ln|x| chi(|x|) dx
  double log_moment() const;

 private:
  double inner_, outer_;
};

/// Regular part R of the zero-mean Green's function G(x) = (1/2pi) ln|x-p| chi + R(x),
/// Laplacian G = delta_p - 1/|Omega|, p given in lattice coordinates.
ScalarField green_regular_part(const GridPtr& grid, double p1, double p2);

/// Nodal samples of G from its closed form in the Jacobi theta function,
/// accurate to rounding; -infinity at a node coinciding with p. The
/// backgrounds are built from this; green_regular_part is the independent
/// Poisson route to the same function.
ScalarField green_function(const GridPtr& grid, double p1, double p2);

/// Singular backgrounds in exponential form, E_i = exp(u0^i) with
/// Laplacian u0^i = 4 pi sum_p m_p delta_p - 4 pi N_i / |Omega|, int u0^i = 0.
struct Background {
  ScalarField e1, e2;
  ScalarField e1_sq, e2_sq, e12;
  int n1 = 0, n2 = 0;
  VortexSet z1, z2;
  /// Non-fatal resolution warnings (vortices closer than two grid spacings).
  std::vector<std::string> warnings;

  const TorusGrid& grid() const noexcept { return e1.grid(); }
  const GridPtr& grid_ptr() const noexcept { return e1.grid_ptr(); }
};

Background build_background(const GridPtr& grid, const VortexSet& z1, const VortexSet& z2);

/// I_i = int E_i e^{w_i}, J_i = int E_i^2 e^{2 w_i}, X = int E1 E2 e^{w1 + w2}.
struct MomentSet {
  double i1 = 0, i2 = 0, j1 = 0, j2 = 0, x = 0;
};

/// Largest w allowed before exponentiation.
inline constexpr double kExpGuard = 700.0;

/// Throws Error(Overflow) if max(w) exceeds kExpGuard.
MomentSet integrals(const Background& bg, const ScalarField& w1, const ScalarField& w2);

/// p = E exp(w + shift) nodally. Throws Error(Overflow) past kExpGuard.
void exp_weighted(std::span<const double> e, std::span<const double> w, double shift,
                  std::span<double> out);

}  // namespace csvx
