#include "fwdreg/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace fwdreg::kernels {

#if defined(__aarch64__)
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void symv_neon(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_neon(a + i * n, x, n);
}

void syr_neon(double alpha, const double* x, double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) axpy_neon(alpha * x[i], x, a + i * n, n);
}

constexpr KernelTable kNeon{Backend::neon, dot_neon, axpy_neon, symv_neon, syr_neon};

}  // namespace

const KernelTable* neon_table() noexcept { return &kNeon; }

#else

const KernelTable* neon_table() noexcept { return nullptr; }

#endif

}  // namespace fwdreg::kernels
