#include "csvx/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "csvx/error.hpp"
#include "csvx/kernels.hpp"

namespace csvx {

namespace {

constexpr double kPi = std::numbers::pi;

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// The FFTW planner is not reentrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// TorusLattice

TorusLattice::TorusLattice(Vec2 e1, Vec2 e2) : e1_(e1), e2_(e2) {
  const double det = e1.x * e2.y - e1.y * e2.x;
  const double scale = norm(e1) * norm(e2);
  if (!(scale > 0.0) || !std::isfinite(det) || std::abs(det) <= 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "lattice vectors must be linearly independent");
  }
  area_ = std::abs(det);
  // Rows of E^{-1} where E = [e1 e2] column-wise.
  b1_ = {e2.y / det, -e2.x / det};
  b2_ = {-e1.y / det, e1.x / det};
  shortest_ = std::min(norm(e1), norm(e2));
  for (int m = -3; m <= 3; ++m) {
    for (int n = -3; n <= 3; ++n) {
      if (m == 0 && n == 0) continue;
      shortest_ = std::min(shortest_, norm({m * e1.x + n * e2.x, m * e1.y + n * e2.y}));
    }
  }
}

Vec2 TorusLattice::to_cartesian(double s1, double s2) const noexcept {
  return {s1 * e1_.x + s2 * e2_.x, s1 * e1_.y + s2 * e2_.y};
}

double TorusLattice::min_image_distance(double ds1, double ds2) const noexcept {
  ds1 -= std::round(ds1);
  ds2 -= std::round(ds2);
  double best = std::numeric_limits<double>::infinity();
  for (int m = -1; m <= 1; ++m) {
    for (int n = -1; n <= 1; ++n) {
      best = std::min(best, norm(to_cartesian(ds1 + m, ds2 + n)));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// TorusGrid

struct TorusGrid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

GridPtr TorusGrid::create(const TorusLattice& lattice, int n1, int n2) {
  if (n1 < 16 || n2 < 16 || n1 % 2 != 0 || n2 % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "grid sizes must be even and at least 16");
  }
  return GridPtr(new TorusGrid(lattice, n1, n2));
}

TorusGrid::TorusGrid(const TorusLattice& lattice, int n1, int n2)
    : lattice_(lattice), n1_(n1), n2_(n2), weight_(lattice.area() / (double(n1) * n2)) {
  const int h2 = n2 / 2 + 1;
  k2_.resize(modes());
  const Vec2 b1 = lattice.dual1(), b2 = lattice.dual2();
  const double g11 = b1.x * b1.x + b1.y * b1.y;
  const double g22 = b2.x * b2.x + b2.y * b2.y;
  const double g12 = b1.x * b2.x + b1.y * b2.y;
  for (int i = 0; i < n1; ++i) {
    const int k1 = i <= n1 / 2 ? i : i - n1;
    for (int j = 0; j < h2; ++j) {
      const int k2 = j;
      const bool nyquist = (i == n1 / 2) || (j == n2 / 2);
      const double cross = nyquist ? 0.0 : 2.0 * k1 * k2 * g12;
      k2_[static_cast<std::size_t>(i) * h2 + j] =
          4.0 * kPi * kPi * (k1 * double(k1) * g11 + cross + k2 * double(k2) * g22);
    }
  }

  plans_ = std::make_unique<Plans>();
  std::vector<double> real(size());
  std::vector<std::complex<double>> spec(modes());
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_2d(n1, n2, real.data(),
                                         reinterpret_cast<fftw_complex*>(spec.data()),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
  plans_->backward = fftw_plan_dft_c2r_2d(n1, n2, reinterpret_cast<fftw_complex*>(spec.data()),
                                          real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->forward || !plans_->backward) {
    throw Error(ErrorCode::InvalidArgument, "FFTW planning failed");
  }
}

TorusGrid::~TorusGrid() = default;

double TorusGrid::spacing() const noexcept {
  return std::min(norm(lattice_.e1()) / n1_, norm(lattice_.e2()) / n2_);
}

bool TorusGrid::compatible(const TorusGrid& other) const noexcept {
  if (this == &other) return true;
  const auto same = [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; };
  return n1_ == other.n1_ && n2_ == other.n2_ && same(lattice_.e1(), other.lattice_.e1()) &&
         same(lattice_.e2(), other.lattice_.e2());
}

void TorusGrid::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void TorusGrid::backward(std::span<const std::complex<double>> in, std::span<double> out) const {
  // c2r destroys its input.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->backward, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double inv = 1.0 / static_cast<double>(size());
  for (double& x : out) x *= inv;
}

void TorusGrid::laplacian(std::span<const double> in, std::span<double> out) const {
  std::vector<std::complex<double>> spec(modes());
  forward(in, spec);
  std::vector<double> symbol(k2_.size());
  for (std::size_t m = 0; m < symbol.size(); ++m) symbol[m] = -k2_[m];
  kernels::active().scale_modes(symbol.data(), spec.data(), spec.size());
  backward(spec, out);
}

void TorusGrid::inverse_laplacian(std::span<const double> in, std::span<double> out) const {
  std::vector<std::complex<double>> spec(modes());
  forward(in, spec);
  std::vector<double> symbol(k2_.size());
  symbol[0] = 0.0;
  for (std::size_t m = 1; m < symbol.size(); ++m) symbol[m] = -1.0 / k2_[m];
  kernels::active().scale_modes(symbol.data(), spec.data(), spec.size());
  backward(spec, out);
}

void TorusGrid::heat_smooth(std::span<const double> in, std::span<double> out, double t) const {
  std::vector<std::complex<double>> spec(modes());
  forward(in, spec);
  std::vector<double> symbol(k2_.size());
  for (std::size_t m = 0; m < symbol.size(); ++m) symbol[m] = std::exp(-t * k2_[m]);
  kernels::active().scale_modes(symbol.data(), spec.data(), spec.size());
  backward(spec, out);
}

double TorusGrid::integrate(std::span<const double> f) const {
  double s = 0.0;
  for (double x : f) s += x;
  return s * weight_;
}

double TorusGrid::mean(std::span<const double> f) const { return integrate(f) / area(); }

double TorusGrid::inner(std::span<const double> f, std::span<const double> g) const {
  return kernels::active().dot(f.data(), g.data(), f.size()) * weight_;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(GridPtr grid, bool mean_zero)
    : grid_(std::move(grid)), values_(grid_->size(), 0.0), mean_zero_(mean_zero) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values, bool mean_zero)
    : grid_(std::move(grid)), values_(std::move(values)), mean_zero_(mean_zero) {
  if (values_.size() != grid_->size()) {
    throw Error(ErrorCode::GridMismatch, "value count does not match the grid");
  }
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::l2_norm() const { return std::sqrt(grid_->inner(values_, values_)); }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!a.grid().compatible(b.grid())) {
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  kernels::active().axpy(1.0, other.values_.data(), values_.data(), values_.size());
  mean_zero_ = mean_zero_ && other.mean_zero_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  kernels::active().axpy(-1.0, other.values_.data(), values_.data(), values_.size());
  mean_zero_ = mean_zero_ && other.mean_zero_;
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& x : values_) x *= s;
  return *this;
}

ScalarField& ScalarField::operator+=(double s) noexcept {
  for (double& x : values_) x += s;
  if (s != 0.0) mean_zero_ = false;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField project_mean_zero(ScalarField f) {
  const double m = f.mean();
  for (double& x : f.values()) x -= m;
  return ScalarField(f.grid_ptr(), std::vector<double>(f.values().begin(), f.values().end()), true);
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out(f.grid_ptr(), true);
  f.grid().laplacian(f.values(), out.values());
  return out;
}

ScalarField poisson_solve(const ScalarField& f) {
  const double scale = f.max_abs();
  if (std::abs(f.mean()) > 1e-8 * scale) {
    throw Error(ErrorCode::NonZeroMean, "Poisson right-hand side must have zero mean");
  }
  ScalarField out(f.grid_ptr(), true);
  f.grid().inverse_laplacian(f.values(), out.values());
  return out;
}

// ---------------------------------------------------------------------------
// VortexSet

VortexSet::VortexSet(std::vector<Vortex> points) : points_(std::move(points)) {
  for (Vortex& p : points_) {
    if (p.multiplicity < 1) throw Error(ErrorCode::InvalidArgument, "multiplicity must be >= 1");
    if (!std::isfinite(p.s1) || !std::isfinite(p.s2)) {
      throw Error(ErrorCode::InvalidArgument, "vortex position must be finite");
    }
    p.s1 -= std::floor(p.s1);
    p.s2 -= std::floor(p.s2);
    if (p.s1 >= 1.0) p.s1 = 0.0;
    if (p.s2 >= 1.0) p.s2 = 0.0;
  }
}

int VortexSet::total() const noexcept {
  int n = 0;
  for (const Vortex& p : points_) n += p.multiplicity;
  return n;
}

}  // namespace csvx
