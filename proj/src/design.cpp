#include "fwdreg/design.hpp"

#include <algorithm>
#include <cmath>

#include "fwdreg/kernels.hpp"

namespace fwdreg {
namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> view(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> view_mut(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

std::size_t numerical_rank(const Matrix& g, double tau) {
  if (g.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<std::size_t>((ev.array() > tau * top).count());
}

Matrix pseudo_inverse(const Matrix& g, double tau) {
  const auto n = g.rows();
  Matrix out = Matrix::Zero(n, n);
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  const auto& ev = eig.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return out;
  const double cut = tau * top;
  const auto& vecs = eig.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (ev(k) > cut) out.noalias() += (1.0 / ev(k)) * vecs.col(k) * vecs.col(k).transpose();
  }
  return out;
}

Vector pinv_solve(const Matrix& g, const Vector& b, double tau) {
  const auto n = g.rows();
  Vector out = Vector::Zero(n);
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  const auto& ev = eig.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return out;
  const double cut = tau * top;
  const auto& vecs = eig.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (ev(k) > cut) out += (vecs.col(k).dot(b) / ev(k)) * vecs.col(k);
  }
  return out;
}

double smallest_positive_eigenvalue(const Matrix& g, double tau) {
  if (g.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > tau * top) return ev(k);
  }
  return 0.0;
}

DesignState::DesignState(std::size_t dim, double lambda) : dim_(dim), lambda_(lambda) {
  if (dim == 0) throw std::invalid_argument("design dimension must be at least 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("regularization lambda must be finite and nonnegative");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  gram_ = lambda * Matrix::Identity(n, n);
  b_ = Vector::Zero(n);
  scratch_ = Vector::Zero(n);
  if (lambda > 0.0) {
    gram_inv_ = (1.0 / lambda) * Matrix::Identity(n, n);
    log_det_ = static_cast<double>(dim) * std::log(lambda);
    has_inverse_ = true;
  }
}

void DesignState::require_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("feature has dimension " + std::to_string(x.size()) + ", design expects " +
                                std::to_string(dim_));
  }
}

void DesignState::update(std::span<const double> x, double y) {
  require_dim(x);
  const auto& k = kernels::active();
  k.syr(1.0, x.data(), gram_.data(), dim_);
  k.axpy(y, x.data(), b_.data(), dim_);
  ++count_;

  if (has_inverse_) {
    k.symv(gram_inv_.data(), x.data(), scratch_.data(), dim_);
    const double m = std::max(0.0, k.dot(x.data(), scratch_.data(), dim_));
    k.syr(-1.0 / (1.0 + m), scratch_.data(), gram_inv_.data(), dim_);
    log_det_ += std::log1p(m);
    if (++since_refactor_ >= kRefactorInterval) refactorize();
  }

  // With lambda = 0 the rank gates the inverse, so track it until it saturates.
  if (lambda_ == 0.0 && rank_ < dim_) {
    rank_ = numerical_rank(gram_);
    if (rank_ == dim_) {
      has_inverse_ = true;
      refactorize();
    }
  }
}

std::size_t DesignState::rank() const {
  if (lambda_ == 0.0) return rank_;
  const Matrix raw = gram_ - lambda_ * Matrix::Identity(gram_.rows(), gram_.cols());
  return numerical_rank(raw);
}

void DesignState::refactorize() {
  since_refactor_ = 0;
  Eigen::LLT<Matrix> llt(gram_);
  const auto n = gram_.rows();
  if (llt.info() != Eigen::Success) {
    // Numerically indefinite: keep the incremental inverse if there is one.
    if (gram_inv_.rows() != n) {
      gram_inv_ = pseudo_inverse(gram_);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
      log_det_ = eig.eigenvalues().array().max(0.0).log().sum();
    }
    return;
  }
  gram_inv_ = llt.solve(Matrix::Identity(n, n));
  gram_inv_ = 0.5 * (gram_inv_ + gram_inv_.transpose()).eval();
  log_det_ = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

const Matrix& DesignState::gram_inv() const {
  if (!has_inverse_) throw SingularDesign("design matrix is singular (lambda = 0, rank < dim)");
  return gram_inv_;
}

Vector DesignState::apply_inverse(std::span<const double> x) const {
  require_dim(x);
  const Matrix& inv = gram_inv();
  Vector out(static_cast<Eigen::Index>(dim_));
  kernels::symv(view(inv), x, view_mut(out));
  return out;
}

double DesignState::mahalanobis_sq(std::span<const double> x) const {
  const Vector u = apply_inverse(x);
  return std::max(0.0, kernels::dot(x, view(u)));
}

Vector DesignState::solve_theta() const {
  const Matrix& inv = gram_inv();
  Vector out(static_cast<Eigen::Index>(dim_));
  kernels::symv(view(inv), view(b_), view_mut(out));
  return out;
}

Vector DesignState::pinv_solve() const { return fwdreg::pinv_solve(gram_, b_); }

}  // namespace fwdreg
