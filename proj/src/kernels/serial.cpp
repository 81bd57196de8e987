#include "nearkit/errors.hpp"
#include "nearkit/kernels.hpp"
#include "nearkit/schatten.hpp"

namespace nearkit::kernels::serial {

Matrix kron(const Matrix& A, const Matrix& B) {
  const Index mb = B.rows(), nb = B.cols();
  Matrix K(A.rows() * mb, A.cols() * nb);
  for (Index j1 = 0; j1 < A.cols(); ++j1)
    for (Index i1 = 0; i1 < A.rows(); ++i1)
      for (Index j2 = 0; j2 < nb; ++j2)
        for (Index i2 = 0; i2 < mb; ++i2)
          K(i1 * mb + i2, j1 * nb + j2) = A(i1, j1) * B(i2, j2);
  return K;
}

Matrix rearrange2(const Matrix& A, const BlockShape& s) {
  Matrix R(s.m2 * s.n2, s.m1 * s.n1);
  for (Index j = 0; j < s.n1; ++j)
    for (Index i = 0; i < s.m1; ++i)
      for (Index jj = 0; jj < s.n2; ++jj)
        for (Index ii = 0; ii < s.m2; ++ii)
          R(jj * s.m2 + ii, j * s.m1 + i) = A(i * s.m2 + ii, j * s.n2 + jj);
  return R;
}

Matrix rearrange2_inv(const Matrix& R, const BlockShape& s) {
  Matrix A(s.rows(), s.cols());
  for (Index j = 0; j < s.n1; ++j)
    for (Index i = 0; i < s.m1; ++i)
      for (Index jj = 0; jj < s.n2; ++jj)
        for (Index ii = 0; ii < s.m2; ++ii)
          A(i * s.m2 + ii, j * s.n2 + jj) = R(jj * s.m2 + ii, j * s.m1 + i);
  return A;
}

Matrix rearrange3(const Matrix& A, const TripleShape& s) {
  Matrix R(s.m1 * s.n1 * s.m2 * s.n2, s.p * s.q);
  for (Index j1 = 0; j1 < s.n1; ++j1)
    for (Index jx = 0; jx < s.q; ++jx)
      for (Index j2 = 0; j2 < s.n2; ++j2)
        for (Index i1 = 0; i1 < s.m1; ++i1)
          for (Index ix = 0; ix < s.p; ++ix)
            for (Index i2 = 0; i2 < s.m2; ++i2) {
              const Index row = i1 * s.p * s.m2 + ix * s.m2 + i2;
              const Index col = j1 * s.q * s.n2 + jx * s.n2 + j2;
              R((j1 * s.n2 + j2) * s.m1 * s.m2 + i1 * s.m2 + i2, jx * s.p + ix) = A(row, col);
            }
  return R;
}

Matrix rearrange3_inv(const Matrix& R, const TripleShape& s) {
  Matrix A(s.rows(), s.cols());
  for (Index j1 = 0; j1 < s.n1; ++j1)
    for (Index jx = 0; jx < s.q; ++jx)
      for (Index j2 = 0; j2 < s.n2; ++j2)
        for (Index i1 = 0; i1 < s.m1; ++i1)
          for (Index ix = 0; ix < s.p; ++ix)
            for (Index i2 = 0; i2 < s.m2; ++i2) {
              const Index row = i1 * s.p * s.m2 + ix * s.m2 + i2;
              const Index col = j1 * s.q * s.n2 + jx * s.n2 + j2;
              A(row, col) = R((j1 * s.n2 + j2) * s.m1 * s.m2 + i1 * s.m2 + i2, jx * s.p + ix);
            }
  return A;
}

Matrix partial_trace(const Matrix& X, Index p) {
  Matrix T = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) T += X.block(i * p, i * p, p, p);
  return T;
}

Matrix antidiagonal_mean(const Matrix& M) {
  const Index m = M.rows(), n = M.cols();
  Vector sum = Vector::Zero(m + n - 1), count = Vector::Zero(m + n - 1);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      sum(i + j) += M(i, j);
      count(i + j) += 1.0;
    }
  Matrix out(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) out(i, j) = sum(i + j) / count(i + j);
  return out;
}

Matrix diagonal_mean(const Matrix& M) {
  const Index m = M.rows(), n = M.cols();
  Vector sum = Vector::Zero(m + n - 1), count = Vector::Zero(m + n - 1);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      sum(i - j + n - 1) += M(i, j);
      count(i - j + n - 1) += 1.0;
    }
  Matrix out(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) out(i, j) = sum(i - j + n - 1) / count(i - j + n - 1);
  return out;
}

Matrix circulant_mean(const Matrix& M) {
  const Index n = M.rows();
  Vector sum = Vector::Zero(n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) sum((j - i + n) % n) += M(i, j);
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) out(i, j) = sum((j - i + n) % n) / static_cast<double>(n);
  return out;
}

Vector schatten_roots(const Vector& s, double mu, double p) {
  Vector z(s.size());
  for (Index i = 0; i < s.size(); ++i) z(i) = scalar_root(s(i), mu, p);
  return z;
}

}  // namespace nearkit::kernels::serial
