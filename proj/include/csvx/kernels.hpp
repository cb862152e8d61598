#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; AVX2/FMA and NEON variants are selected once at startup
// and must agree with the reference to rounding (see tests/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <string_view>

namespace csvx::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Unweighted sums over nodes of p1, p2, p1^2, p2^2 and p1 p2.
struct MomentSums {
  double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
};

/// Quadratic form r = l1 p1 + l2 p2 + q11 p1^2 + q12 p1 p2 + q22 p2^2, one per component.
struct QuadraticCoeffs {
  double l1, l2, q11, q12, q22;
};

struct KernelTable {
  Isa isa;
  MomentSums (*moment_sums)(const double* p1, const double* p2, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y += alpha x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// out = x * y
  void (*multiply)(const double* x, const double* y, double* out, std::size_t n);
  /// Pointwise quadratic forms for both components.
  void (*quadratic_pair)(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2, const double* p1,
                         const double* p2, double* r1, double* r2, std::size_t n);
  /// Jacobian of quadratic_pair with respect to (log p1, log p2):
  /// jij = (d r_i / d p_j) p_j.
  void (*quadratic_jacobian)(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2,
                             const double* p1, const double* p2, double* j11, double* j12,
                             double* j21, double* j22, std::size_t n);
  /// data[m] *= symbol[m] for complex data and a real symbol.
  void (*scale_modes)(const double* symbol, std::complex<double>* data, std::size_t n);
  /// (z1, z2)[m] <- M[m] (z1, z2)[m] with real per-mode 2x2 matrices.
  void (*apply_mode_matrices)(const double* m11, const double* m12, const double* m21,
                              const double* m22, std::complex<double>* z1,
                              std::complex<double>* z2, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the ISA is not compiled in or not supported by this CPU.
const KernelTable* table_for(Isa isa);
/// The dispatched table. Honors CSVX_SIMD=scalar|avx2|neon when set.
const KernelTable& active();

}  // namespace csvx::kernels
