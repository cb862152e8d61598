#include "kernels_impl.hpp"

namespace csvx::kernels::detail {

namespace {

MomentSums moment_sums(const double* p1, const double* p2, std::size_t n) {
  MomentSums m;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p1[i], b = p2[i];
    m.s1 += a;
    m.s2 += b;
    m.s11 += a * a;
    m.s22 += b * b;
    m.s12 += a * b;
  }
  return m;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void multiply(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void quadratic_pair(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2, const double* p1,
                    const double* p2, double* r1, double* r2, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p1[i], b = p2[i];
    r1[i] = c1.l1 * a + c1.l2 * b + c1.q11 * a * a + c1.q12 * a * b + c1.q22 * b * b;
    r2[i] = c2.l1 * a + c2.l2 * b + c2.q11 * a * a + c2.q12 * a * b + c2.q22 * b * b;
  }
}

void quadratic_jacobian(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2, const double* p1,
                        const double* p2, double* j11, double* j12, double* j21, double* j22,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p1[i], b = p2[i];
    j11[i] = (c1.l1 + 2.0 * c1.q11 * a + c1.q12 * b) * a;
    j12[i] = (c1.l2 + c1.q12 * a + 2.0 * c1.q22 * b) * b;
    j21[i] = (c2.l1 + 2.0 * c2.q11 * a + c2.q12 * b) * a;
    j22[i] = (c2.l2 + c2.q12 * a + 2.0 * c2.q22 * b) * b;
  }
}

void scale_modes(const double* symbol, std::complex<double>* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) data[i] *= symbol[i];
}

void apply_mode_matrices(const double* m11, const double* m12, const double* m21,
                         const double* m22, std::complex<double>* z1, std::complex<double>* z2,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> a = z1[i], b = z2[i];
    z1[i] = m11[i] * a + m12[i] * b;
    z2[i] = m21[i] * a + m22[i] * b;
  }
}

}  // namespace

const KernelTable kScalarTable{Isa::Scalar,   moment_sums,        dot,
                               axpy,          multiply,           quadratic_pair,
                               quadratic_jacobian, scale_modes,   apply_mode_matrices};

}  // namespace csvx::kernels::detail
