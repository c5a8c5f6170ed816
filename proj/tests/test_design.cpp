#include <doctest.h>

#include <cmath>
#include <limits>

#include "fwdreg/design.hpp"
#include "fwdreg/kernels.hpp"
#include "support.hpp"

using fwdreg::DesignState;
using fwdreg::Matrix;
using fwdreg::SingularDesign;
using fwdreg::Vector;
using testing::Draw;
using testing::max_abs;
using testing::view;

namespace {

Vector v(std::initializer_list<double> xs) {
  Vector out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("construction") {
  SUBCASE("identity") {
    DesignState s(2, 1.0);
    CHECK(max_abs(s.gram() - Matrix::Identity(2, 2)) == 0.0);
    CHECK(s.log_det() == 0.0);
    CHECK(s.count() == 0);
  }
  SUBCASE("scalar") {
    DesignState s(1, 2.0);
    CHECK(s.gram()(0, 0) == 2.0);
    CHECK(s.log_det() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  }
  SUBCASE("unregularized starts empty") {
    DesignState s(3, 0.0);
    CHECK(max_abs(s.gram()) == 0.0);
    CHECK_FALSE(s.has_inverse());
    CHECK(s.rank() == 0);
    CHECK_THROWS_AS(s.gram_inv(), SingularDesign);
  }
  SUBCASE("rejects bad arguments") {
    CHECK_THROWS_AS(DesignState(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DesignState(2, -1.0), std::invalid_argument);
  }
}

TEST_CASE("rank-one update by hand") {
  DesignState s(1, 1.0);
  const Vector one = v({1.0});
  s.update(view(one), 1.0);
  CHECK(s.gram()(0, 0) == 2.0);
  CHECK(s.b()(0) == 1.0);
  CHECK(s.log_det() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(s.mahalanobis_sq(view(one)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.solve_theta()(0) == doctest::Approx(0.5).epsilon(1e-15));
  s.update(view(one), 1.0);
  CHECK(s.gram()(0, 0) == 3.0);
  CHECK(s.b()(0) == 2.0);
  CHECK(s.count() == 2);
  CHECK_THROWS_AS(s.update(view(v({1.0, 2.0})), 0.0), std::invalid_argument);
}

TEST_CASE("mahalanobis on the identity metric") {
  DesignState s(2, 1.0);
  CHECK(s.mahalanobis_sq(view(v({3.0, 4.0}))) == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("incremental inverse matches dense inversion") {
  Draw r(11);
  DesignState s(5, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Vector x = r.vec(5);
    s.update(view(x), r.normal());
  }
  const Matrix direct = s.gram().inverse();
  CHECK(max_abs(s.gram_inv() - direct) <= 1e-8);
  CHECK(s.log_det() == doctest::Approx(std::log(s.gram().determinant())).epsilon(1e-8));
  const Vector theta = s.gram().ldlt().solve(s.b());
  CHECK(max_abs(s.solve_theta() - theta) <= 1e-8);
  CHECK(max_abs(s.pinv_solve() - s.solve_theta()) <= 1e-8);
}

TEST_CASE("mahalanobis matches a direct solve") {
  Draw r(12);
  for (int trial = 0; trial < 50; ++trial) {
    DesignState s(4, 0.5);
    for (int t = 0; t < 10; ++t) {
      const Vector x = r.vec(4);
      s.update(view(x), 0.0);
    }
    const Vector x = r.vec(4);
    const Vector z = s.gram().llt().solve(x);
    CHECK(std::abs(s.mahalanobis_sq(view(x)) - x.dot(z)) <= 1e-10 * (1.0 + x.dot(z)));
  }
}

TEST_CASE("zero response gives zero parameter") {
  Draw r(13);
  DesignState s(3, 2.0);
  for (int t = 0; t < 5; ++t) {
    const Vector x = r.vec(3);
    s.update(view(x), 0.0);
  }
  CHECK(s.solve_theta().norm() == 0.0);
}

TEST_CASE("pseudo-inverse path") {
  SUBCASE("zero matrix") {
    DesignState s(2, 0.0);
    CHECK(s.pinv_solve().norm() == 0.0);
    CHECK(fwdreg::pinv_solve(Matrix::Zero(3, 3), Vector::Zero(3)).norm() == 0.0);
  }
  SUBCASE("rank-one projection") {
    DesignState s(2, 0.0);
    s.update(view(v({1.0, 0.0})), 1.0);
    CHECK(s.rank() == 1);
    const Vector theta = s.pinv_solve();
    CHECK(theta(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(theta(1)) <= 1e-14);
    CHECK_THROWS_AS(s.solve_theta(), SingularDesign);
    CHECK_THROWS_AS(s.mahalanobis_sq(view(v({1.0, 0.0}))), SingularDesign);
  }
  SUBCASE("inverse appears at full rank") {
    Draw r(14);
    DesignState s(3, 0.0);
    for (std::size_t t = 1; t <= 3; ++t) {
      const Vector x = r.vec(3);
      s.update(view(x), r.normal());
      CHECK(s.rank() == t);
    }
    REQUIRE(s.has_inverse());
    CHECK(max_abs(s.gram_inv() * s.gram() - Matrix::Identity(3, 3)) <= 1e-8);
    CHECK(max_abs(s.pinv_solve() - s.solve_theta()) <= 1e-8);
    CHECK(s.log_det() == doctest::Approx(std::log(s.gram().determinant())).epsilon(1e-8));
  }
  SUBCASE("threshold is relative to the top eigenvalue") {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1e6;
    g(1, 1) = 1e-5;
    CHECK(fwdreg::numerical_rank(g) == 1);
    g(1, 1) = 1e-3;
    CHECK(fwdreg::numerical_rank(g) == 2);
    CHECK(fwdreg::smallest_positive_eigenvalue(g) == doctest::Approx(1e-3));
  }
}

TEST_CASE("property: Sherman-Morrison drift stays bounded") {
  Draw r(15);
  for (double lambda : {1e-6, 1e-2, 1.0}) {
    CAPTURE(lambda);
    DesignState s(20, lambda);
    double worst = 0.0;
    for (int t = 1; t <= 10000; ++t) {
      const Vector x = r.vec(20);
      s.update(view(x), r.normal());
      if (t % 997 == 0 || t == 10000) {
        worst = std::max(worst, max_abs(s.gram() * s.gram_inv() - Matrix::Identity(20, 20)));
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("property: log-determinant increments equal log(1 + m)") {
  Draw r(16);
  for (int trial = 0; trial < 20; ++trial) {
    DesignState s(6, r.uniform(0.1, 3.0));
    for (int t = 0; t < 50; ++t) {
      const Vector x = r.vec(6, r.uniform(0.1, 2.0));
      const double m = s.mahalanobis_sq(view(x));
      const double before = s.log_det();
      s.update(view(x), 0.0);
      CHECK(std::abs((s.log_det() - before) - std::log1p(m)) <= 1e-10);
    }
  }
}

TEST_CASE("property: potential after adding x equals m / (1 + m)") {
  Draw r(17);
  for (int trial = 0; trial < 200; ++trial) {
    DesignState s(4, r.uniform(0.01, 2.0));
    const int steps = static_cast<int>(r.uniform(0, 30));
    for (int t = 0; t < steps; ++t) {
      const Vector x = r.vec(4);
      s.update(view(x), 0.0);
    }
    const Vector x = r.vec(4, r.uniform(0.1, 10.0));
    const double m = s.mahalanobis_sq(view(x));
    s.update(view(x), 0.0);
    const double after = s.mahalanobis_sq(view(x));
    CHECK(std::abs(after - m / (1.0 + m)) <= 1e-10);
    CHECK(after <= 1.0);
  }
}

TEST_CASE("scalar and SIMD kernels give the same design") {
  namespace k = fwdreg::kernels;
  const auto original = k::active().backend;
  auto run = [] {
    Draw r(18);
    DesignState s(13, 0.3);
    for (int t = 0; t < 600; ++t) {
      const Vector x = r.vec(13);
      s.update(view(x), r.normal());
    }
    return s;
  };
  REQUIRE(k::select(k::Backend::scalar));
  const DesignState a = run();
  k::select(original);
  const DesignState b = run();
  CHECK(max_abs(a.gram() - b.gram()) <= 1e-11);
  CHECK(max_abs(a.gram_inv() - b.gram_inv()) <= 1e-11);
  CHECK(std::abs(a.log_det() - b.log_det()) <= 1e-10);
}
