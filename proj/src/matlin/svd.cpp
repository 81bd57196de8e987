#include "nearkit/errors.hpp"
#include "nearkit/matlin.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <string>

namespace nearkit {

namespace {

constexpr Index kBdcCutover = 128;

// Flip column j so that its first entry of largest magnitude is >= 0.
bool needs_flip(const Matrix& Q, Index j) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < Q.rows(); ++i) {
    const double a = std::abs(Q(i, j));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return Q.rows() > 0 && Q(best, j) < 0.0;
}

template <class Solver>
SvdFactors collect(const Solver& solver, Index m, Index n) {
  SvdFactors f;
  f.U = solver.matrixU();
  f.V = solver.matrixV();
  f.sigma = solver.singularValues();
  const Index k = std::min(m, n);
  for (Index j = 0; j < k; ++j) {
    if (needs_flip(f.U, j)) {
      f.U.col(j) *= -1.0;
      f.V.col(j) *= -1.0;
    }
  }
  for (Index j = k; j < m; ++j)
    if (needs_flip(f.U, j)) f.U.col(j) *= -1.0;
  for (Index j = k; j < n; ++j)
    if (needs_flip(f.V, j)) f.V.col(j) *= -1.0;
  return f;
}

}  // namespace

Matrix SvdFactors::reconstruct() const {
  const Index k = sigma.size();
  return U.leftCols(k) * sigma.asDiagonal() * V.leftCols(k).transpose();
}

double rank_tolerance(Index rows, Index cols, double sigma1, double factor) {
  return factor * static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sigma1;
}

SvdFactors svd(const Matrix& M, double rank_tol_factor) {
  require_finite(M, "svd input");
  const Index m = M.rows(), n = M.cols();
  SvdFactors f;
  if (std::min(m, n) == 0) {
    f.U = Matrix::Identity(m, m);
    f.V = Matrix::Identity(n, n);
    f.sigma = Vector(0);
    return f;
  }
  constexpr int opts = Eigen::ComputeFullU | Eigen::ComputeFullV;
  if (std::min(m, n) > kBdcCutover) {
    Eigen::BDCSVD<Matrix> solver(M, opts);
    f = collect(solver, m, n);
  } else {
    Eigen::JacobiSVD<Matrix> solver(M, opts);
    f = collect(solver, m, n);
  }
  if (!all_finite(f.U) || !all_finite(f.V) || !all_finite(f.sigma))
    throw NumericError("svd of a " + std::to_string(m) + "x" + std::to_string(n) +
                       " matrix produced non-finite factors");
  const double tau = rank_tolerance(m, n, f.sigma(0), rank_tol_factor);
  f.numerical_rank = (f.sigma.array() > tau).count();
  return f;
}

Matrix pinv(const Matrix& M, double rank_tol_factor) {
  const SvdFactors f = svd(M, rank_tol_factor);
  const Index r = f.numerical_rank;
  Matrix P = Matrix::Zero(M.cols(), M.rows());
  if (r == 0) return P;
  const Vector inv = f.sigma.head(r).cwiseInverse();
  P.noalias() = f.V.leftCols(r) * inv.asDiagonal() * f.U.leftCols(r).transpose();
  return P;
}

}  // namespace nearkit
