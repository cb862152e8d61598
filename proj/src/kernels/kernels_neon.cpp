// AArch64 Advanced SIMD variants (two doubles per register).
#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace csvx::kernels::detail {

namespace {

MomentSums moment_sums(const double* p1, const double* p2, std::size_t n) {
  float64x2_t a1 = vdupq_n_f64(0.0), a2 = a1, a11 = a1, a22 = a1, a12 = a1;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(p1 + i);
    const float64x2_t y = vld1q_f64(p2 + i);
    a1 = vaddq_f64(a1, x);
    a2 = vaddq_f64(a2, y);
    a11 = vfmaq_f64(a11, x, x);
    a22 = vfmaq_f64(a22, y, y);
    a12 = vfmaq_f64(a12, x, y);
  }
  MomentSums m{vaddvq_f64(a1), vaddvq_f64(a2), vaddvq_f64(a11), vaddvq_f64(a22),
               vaddvq_f64(a12)};
  for (; i < n; ++i) {
    const double x = p1[i], y = p2[i];
    m.s1 += x;
    m.s2 += y;
    m.s11 += x * x;
    m.s22 += y * y;
    m.s12 += x * y;
  }
  return m;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void multiply(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

inline float64x2_t quad(const QuadraticCoeffs& c, float64x2_t a, float64x2_t b) {
  const float64x2_t t1 =
      vfmaq_f64(vfmaq_f64(vdupq_n_f64(c.l1), vdupq_n_f64(c.q12), b), vdupq_n_f64(c.q11), a);
  const float64x2_t t2 = vfmaq_f64(vdupq_n_f64(c.l2), vdupq_n_f64(c.q22), b);
  return vfmaq_f64(vmulq_f64(t2, b), t1, a);
}

void quadratic_pair(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2, const double* p1,
                    const double* p2, double* r1, double* r2, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(p1 + i);
    const float64x2_t b = vld1q_f64(p2 + i);
    vst1q_f64(r1 + i, quad(c1, a, b));
    vst1q_f64(r2 + i, quad(c2, a, b));
  }
  for (; i < n; ++i) {
    const double a = p1[i], b = p2[i];
    r1[i] = c1.l1 * a + c1.l2 * b + c1.q11 * a * a + c1.q12 * a * b + c1.q22 * b * b;
    r2[i] = c2.l1 * a + c2.l2 * b + c2.q11 * a * a + c2.q12 * a * b + c2.q22 * b * b;
  }
}

void quadratic_jacobian(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2, const double* p1,
                        const double* p2, double* j11, double* j12, double* j21, double* j22,
                        std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(p1 + i);
    const float64x2_t b = vld1q_f64(p2 + i);
    const float64x2_t a2 = vaddq_f64(a, a);
    const float64x2_t b2 = vaddq_f64(b, b);
    auto row = [&](const QuadraticCoeffs& c, double* out_a, double* out_b) {
      const float64x2_t da = vfmaq_f64(vfmaq_f64(vdupq_n_f64(c.l1), vdupq_n_f64(c.q12), b),
                                       vdupq_n_f64(c.q11), a2);
      const float64x2_t db = vfmaq_f64(vfmaq_f64(vdupq_n_f64(c.l2), vdupq_n_f64(c.q12), a),
                                       vdupq_n_f64(c.q22), b2);
      vst1q_f64(out_a + i, vmulq_f64(da, a));
      vst1q_f64(out_b + i, vmulq_f64(db, b));
    };
    row(c1, j11, j12);
    row(c2, j21, j22);
  }
  for (; i < n; ++i) {
    const double a = p1[i], b = p2[i];
    j11[i] = (c1.l1 + 2.0 * c1.q11 * a + c1.q12 * b) * a;
    j12[i] = (c1.l2 + c1.q12 * a + 2.0 * c1.q22 * b) * b;
    j21[i] = (c2.l1 + 2.0 * c2.q11 * a + c2.q12 * b) * a;
    j22[i] = (c2.l2 + c2.q12 * a + 2.0 * c2.q22 * b) * b;
  }
}

// One complex<double> per register: (re, im).
void scale_modes(const double* symbol, std::complex<double>* data, std::size_t n) {
  auto* raw = reinterpret_cast<double*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(raw + 2 * i, vmulq_n_f64(vld1q_f64(raw + 2 * i), symbol[i]));
  }
}

void apply_mode_matrices(const double* m11, const double* m12, const double* m21,
                         const double* m22, std::complex<double>* z1, std::complex<double>* z2,
                         std::size_t n) {
  auto* r1 = reinterpret_cast<double*>(z1);
  auto* r2 = reinterpret_cast<double*>(z2);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t a = vld1q_f64(r1 + 2 * i);
    const float64x2_t b = vld1q_f64(r2 + 2 * i);
    vst1q_f64(r1 + 2 * i, vfmaq_n_f64(vmulq_n_f64(b, m12[i]), a, m11[i]));
    vst1q_f64(r2 + 2 * i, vfmaq_n_f64(vmulq_n_f64(b, m22[i]), a, m21[i]));
  }
}

}  // namespace

const KernelTable kNeonTable{Isa::Neon,         moment_sums,       dot,
                             axpy,              multiply,          quadratic_pair,
                             quadratic_jacobian, scale_modes,      apply_mode_matrices};

}  // namespace csvx::kernels::detail
