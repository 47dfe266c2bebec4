#include <arm_neon.h>

#include "fraclab/simd/kernels.hpp"

namespace fraclab::simd {

namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void rotate_neon(double* x, double* y, double c, double s, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t yi = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, xi), vs, yi));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, yi), vs, xi));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void accumulate_squares_neon(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    vst1q_f64(acc + i, vfmaq_f64(vld1q_f64(acc + i), v, v));
  }
  for (; i < n; ++i) acc[i] += x[i] * x[i];
}

constexpr KernelTable kNeon{Isa::Neon, dot_neon, axpy_neon, rotate_neon, accumulate_squares_neon};

}  // namespace

namespace detail {
const KernelTable* neon_table_if_compiled() noexcept { return &kNeon; }
}  // namespace detail

}  // namespace fraclab::simd
