#include "fwdreg/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define FWDREG_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#else
#define FWDREG_HAVE_AVX2_VARIANT 0
#endif

namespace fwdreg::kernels {

#if FWDREG_HAVE_AVX2_VARIANT
namespace {

#define FWDREG_AVX2 __attribute__((target("avx2,fma")))

FWDREG_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

FWDREG_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

FWDREG_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

FWDREG_AVX2 void symv_avx2(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_avx2(a + i * n, x, n);
}

FWDREG_AVX2 void syr_avx2(double alpha, const double* x, double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) axpy_avx2(alpha * x[i], x, a + i * n, n);
}

#undef FWDREG_AVX2

constexpr KernelTable kAvx2{Backend::avx2, dot_avx2, axpy_avx2, symv_avx2, syr_avx2};

}  // namespace

const KernelTable* avx2_table() noexcept {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() noexcept { return nullptr; }

#endif

}  // namespace fwdreg::kernels
