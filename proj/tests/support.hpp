#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fwdreg/design.hpp"

namespace testing {

using fwdreg::Matrix;
using fwdreg::Vector;

// Test-side randomness, deliberately independent of the library's Rng.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : gen_(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

  Vector vec(std::size_t d, double scale = 1.0) {
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = scale * normal();
    return v;
  }

  Matrix spd(std::size_t d, double ridge = 1.0) {
    Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal();
    return a * a.transpose() + ridge * Matrix::Identity(a.rows(), a.cols());
  }

 private:
  std::mt19937_64 gen_;
};

inline std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testing
