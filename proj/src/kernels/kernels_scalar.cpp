#include "fwdreg/kernels.hpp"

namespace fwdreg::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void symv_scalar(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_scalar(a + i * n, x, n);
}

void syr_scalar(double alpha, const double* x, double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) axpy_scalar(alpha * x[i], x, a + i * n, n);
}

constexpr KernelTable kScalar{Backend::scalar, dot_scalar, axpy_scalar, symv_scalar, syr_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace fwdreg::kernels
