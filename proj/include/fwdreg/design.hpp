#pragma once

// Regularized design (Gram) matrix G = lambda*I + sum x x^T with its inverse,
// response vector b = sum x y and log-determinant, maintained under rank-one
// updates.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fwdreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an operation needs G^{-1} but G is singular (lambda = 0 and
/// the accumulated features do not span R^d yet).
class SingularDesign : public std::runtime_error {
 public:
  explicit SingularDesign(const std::string& what) : std::runtime_error(what) {}
};

/// Eigenvalues below tau * lambda_max are treated as zero.
inline constexpr double kRankTolerance = 1e-10;

/// Number of eigenvalues of the symmetric PSD matrix g above tau * lambda_max.
std::size_t numerical_rank(const Matrix& g, double tau = kRankTolerance);

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix via its spectrum.
Matrix pseudo_inverse(const Matrix& g, double tau = kRankTolerance);

/// g^+ b; the zero matrix maps every b to the zero vector.
Vector pinv_solve(const Matrix& g, const Vector& b, double tau = kRankTolerance);

/// Smallest strictly positive eigenvalue (above the rank threshold) of g, or 0
/// when g is numerically zero.
double smallest_positive_eigenvalue(const Matrix& g, double tau = kRankTolerance);

class DesignState {
 public:
  /// Inverse drift is reset by a fresh Cholesky factorization this often.
  static constexpr std::size_t kRefactorInterval = 512;

  DesignState(std::size_t dim, double lambda);

  /// G += x x^T, b += y x. The inverse follows by Sherman-Morrison and the
  /// log-determinant by the matrix determinant lemma.
  void update(std::span<const double> x, double y);

  /// x^T G^{-1} x. Throws SingularDesign when no inverse is available.
  double mahalanobis_sq(std::span<const double> x) const;

  /// G^{-1} x.
  Vector apply_inverse(std::span<const double> x) const;

  /// G^{-1} b.
  Vector solve_theta() const;

  /// G^+ b, valid at any rank; equals solve_theta() when G is invertible.
  Vector pinv_solve() const;

  std::size_t dim() const noexcept { return dim_; }
  double lambda() const noexcept { return lambda_; }
  std::size_t count() const noexcept { return count_; }
  /// Numerical rank of sum x x^T (tracked incrementally when lambda = 0,
  /// computed on demand otherwise).
  std::size_t rank() const;
  bool has_inverse() const noexcept { return has_inverse_; }

  const Matrix& gram() const noexcept { return gram_; }
  const Vector& b() const noexcept { return b_; }
  const Matrix& gram_inv() const;

  /// log|G|; -infinity while G is singular.
  double log_det() const noexcept { return log_det_; }

 private:
  void refactorize();
  void require_dim(std::span<const double> x) const;

  std::size_t dim_;
  double lambda_;
  Matrix gram_;
  Matrix gram_inv_;
  Vector b_;
  Vector scratch_;
  double log_det_ = -std::numeric_limits<double>::infinity();
  std::size_t count_ = 0;
  std::size_t rank_ = 0;
  std::size_t since_refactor_ = 0;
  bool has_inverse_ = false;
};

}  // namespace fwdreg
