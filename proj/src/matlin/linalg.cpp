#include "nearkit/errors.hpp"
#include "nearkit/kernels.hpp"
#include "nearkit/matlin.hpp"

#include <random>
#include <string>

namespace nearkit {

namespace {

std::string dims(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

void require_shape(const Matrix& A, Index rows, Index cols, const char* op) {
  if (A.rows() != rows || A.cols() != cols)
    throw DomainError(std::string(op) + ": expected " + dims(rows, cols) + ", got " + dims(A.rows(), A.cols()));
}

}  // namespace

bool all_finite(const Matrix& M) { return M.allFinite(); }

void require_finite(const Matrix& M, std::string_view what) {
  if (!M.allFinite()) throw NumericError(std::string(what) + " contains NaN or Inf");
}

Vector vec(const Matrix& X) { return Eigen::Map<const Vector>(X.data(), X.size()); }

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (rows < 0 || cols < 0 || v.size() != rows * cols)
    throw DomainError("unvec: length " + std::to_string(v.size()) + " does not fit " + dims(rows, cols));
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& A, const Matrix& B) { return kernels::kron(A, B); }

Matrix rearrange2(const Matrix& A, const BlockShape& shape) {
  if (!shape.valid()) throw DomainError("rearrange2: block shape components must be >= 1");
  require_shape(A, shape.rows(), shape.cols(), "rearrange2");
  return kernels::rearrange2(A, shape);
}

Matrix rearrange2_inv(const Matrix& R, const BlockShape& shape) {
  if (!shape.valid()) throw DomainError("rearrange2_inv: block shape components must be >= 1");
  require_shape(R, shape.m2 * shape.n2, shape.m1 * shape.n1, "rearrange2_inv");
  return kernels::rearrange2_inv(R, shape);
}

Matrix rearrange3(const Matrix& A, const TripleShape& s) {
  require_shape(A, s.rows(), s.cols(), "rearrange3");
  return kernels::rearrange3(A, s);
}

Matrix rearrange3_inv(const Matrix& R, const TripleShape& s) {
  require_shape(R, s.m1 * s.n1 * s.m2 * s.n2, s.p * s.q, "rearrange3_inv");
  return kernels::rearrange3_inv(R, s);
}

double rearrange3_self_test() {
  std::mt19937_64 gen(20240917);
  std::normal_distribution<double> normal;
  auto draw = [&] {
    Matrix M(2, 2);
    for (Index j = 0; j < 2; ++j)
      for (Index i = 0; i < 2; ++i) M(i, j) = normal(gen);
    return M;
  };
  const Matrix Y = draw(), X = draw(), Z = draw();
  const TripleShape s{2, 2, 2, 2, 2, 2};
  const Matrix lhs = rearrange3(kron(Y, kron(X, Z)), s);
  const Matrix rhs = vec(kron(Y, Z)) * vec(X).transpose();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

Vector vecb(const Matrix& A, const BlockShape& shape) { return vec(rearrange2(A, shape)); }

Matrix partial_trace(const Matrix& X, Index p) {
  if (p < 1) throw DomainError("partial_trace: p must be >= 1");
  require_shape(X, p * p, p * p, "partial_trace");
  return kernels::partial_trace(X, p);
}

Matrix commutation_matrix(Index rows, Index cols) {
  Matrix K = Matrix::Zero(rows * cols, rows * cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) K(j + i * cols, i + j * rows) = 1.0;
  return K;
}

}  // namespace nearkit
