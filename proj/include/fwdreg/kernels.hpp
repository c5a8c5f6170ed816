#pragma once

// Dense inner-loop kernels used by the design-matrix maintenance and the
// bandit index scans. Each kernel has a scalar reference implementation and
// SIMD variants (AVX2+FMA on x86-64, NEON on AArch64); the active table is
// picked once at startup from the CPU's capabilities.
//
// Matrices are d x d, stored densely with leading dimension d. Every caller
// passes symmetric matrices, so row- and column-major storage coincide.

#include <cstddef>
#include <span>
#include <string_view>

namespace fwdreg::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A is n x n
  void (*symv)(const double* a, const double* x, double* y, std::size_t n);
  // A += alpha * x x^T, A is n x n
  void (*syr)(double alpha, const double* x, double* a, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

/// Best table supported by the running CPU. Setting the environment variable
/// FWDREG_KERNELS=scalar before first use forces the reference kernels.
const KernelTable& active() noexcept;

/// Overrides the active table (tests, benchmarking). Returns false if the
/// requested backend is unavailable on this machine.
bool select(Backend backend) noexcept;

std::string_view backend_name(Backend backend) noexcept;

// Span conveniences over the active table.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void symv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  active().symv(a.data(), x.data(), y.data(), x.size());
}

inline void syr(double alpha, std::span<const double> x, std::span<double> a) {
  active().syr(alpha, x.data(), a.data(), x.size());
}

}  // namespace fwdreg::kernels
