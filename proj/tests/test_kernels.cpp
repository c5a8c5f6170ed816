#include <doctest.h>

#include <vector>

#include "fwdreg/kernels.hpp"
#include "support.hpp"

namespace k = fwdreg::kernels;
using testing::Draw;

namespace {

std::vector<const k::KernelTable*> simd_tables() {
  std::vector<const k::KernelTable*> out;
  if (auto* t = k::avx2_table()) out.push_back(t);
  if (auto* t = k::neon_table()) out.push_back(t);
  return out;
}

std::vector<double> draw(Draw& r, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = r.normal();
  return v;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const auto& s = k::scalar_table();
  const double a[] = {1, 2, 3};
  const double b[] = {4, 5, 6};
  CHECK(s.dot(a, b, 3) == 32.0);

  double y[] = {1, 1, 1};
  s.axpy(2.0, a, y, 3);
  CHECK(y[0] == 3.0);
  CHECK(y[2] == 7.0);

  const double m[] = {2, 1, 1, 3};
  const double x[] = {1, -1};
  double out[2];
  s.symv(m, x, out, 2);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == -2.0);

  double g[] = {0, 0, 0, 0};
  s.syr(0.5, x, g, 2);
  CHECK(g[0] == 0.5);
  CHECK(g[1] == -0.5);
  CHECK(g[3] == 0.5);
}

TEST_CASE("SIMD variants agree with the scalar reference") {
  const auto tables = simd_tables();
  if (tables.empty()) {
    MESSAGE("no SIMD variant available on this CPU");
    return;
  }
  const auto& ref = k::scalar_table();
  Draw r(7);
  for (const auto* t : tables) {
    CAPTURE(k::backend_name(t->backend));
    for (std::size_t n = 0; n <= 70; ++n) {
      CAPTURE(n);
      const auto a = draw(r, n);
      const auto b = draw(r, n);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
      CHECK(std::abs(t->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-14 * (1.0 + scale));

      auto y1 = b;
      auto y2 = b;
      t->axpy(0.37, a.data(), y1.data(), n);
      ref.axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (1.0 + std::abs(y2[i])));

      if (n == 0 || n > 40) continue;
      auto m = draw(r, n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) m[i * n + j] = m[j * n + i];
      std::vector<double> o1(n), o2(n);
      t->symv(m.data(), a.data(), o1.data(), n);
      ref.symv(m.data(), a.data(), o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) <= 1e-13 * (1.0 + std::abs(o2[i])));

      auto g1 = m;
      auto g2 = m;
      t->syr(-0.8, a.data(), g1.data(), n);
      ref.syr(-0.8, a.data(), g2.data(), n);
      for (std::size_t i = 0; i < n * n; ++i) CHECK(std::abs(g1[i] - g2[i]) <= 1e-14 * (1.0 + std::abs(g2[i])));
    }
  }
}

TEST_CASE("dispatch selects and restores backends") {
  const auto original = k::active().backend;
  REQUIRE(k::select(k::Backend::scalar));
  CHECK(k::active().backend == k::Backend::scalar);
  const double a[] = {1, 2};
  CHECK(k::dot(a, a) == 5.0);
  CHECK(k::select(original));
  CHECK(k::active().backend == original);
  CHECK(k::backend_name(k::Backend::avx2) == "avx2");
}
