#include "nearkit/kernels.hpp"
#include "nearkit/schatten.hpp"

namespace nearkit::kernels {

// Every loop below parallelizes over output columns, so writes never overlap.

Matrix kron(const Matrix& A, const Matrix& B) {
  const Index mb = B.rows(), nb = B.cols(), ma = A.rows();
  Matrix K(ma * mb, A.cols() * nb);
  const Index cols = K.cols();
#pragma omp parallel for schedule(static) if (K.size() >= kParallelThreshold)
  for (Index c = 0; c < cols; ++c) {
    const Index j1 = c / nb, j2 = c % nb;
    for (Index i1 = 0; i1 < ma; ++i1) K.col(c).segment(i1 * mb, mb) = A(i1, j1) * B.col(j2);
  }
  return K;
}

Matrix rearrange2(const Matrix& A, const BlockShape& s) {
  Matrix R(s.m2 * s.n2, s.m1 * s.n1);
  const Index cols = R.cols();
#pragma omp parallel for schedule(static) if (R.size() >= kParallelThreshold)
  for (Index c = 0; c < cols; ++c) {
    const Index j = c / s.m1, i = c % s.m1;
    for (Index jj = 0; jj < s.n2; ++jj)
      R.col(c).segment(jj * s.m2, s.m2) = A.col(j * s.n2 + jj).segment(i * s.m2, s.m2);
  }
  return R;
}

Matrix rearrange2_inv(const Matrix& R, const BlockShape& s) {
  Matrix A(s.rows(), s.cols());
  const Index cols = A.cols();
#pragma omp parallel for schedule(static) if (A.size() >= kParallelThreshold)
  for (Index c = 0; c < cols; ++c) {
    const Index j = c / s.n2, jj = c % s.n2;
    for (Index i = 0; i < s.m1; ++i)
      A.col(c).segment(i * s.m2, s.m2) = R.col(j * s.m1 + i).segment(jj * s.m2, s.m2);
  }
  return A;
}

Matrix rearrange3(const Matrix& A, const TripleShape& s) {
  Matrix R(s.m1 * s.n1 * s.m2 * s.n2, s.p * s.q);
  const Index cols = R.cols();
#pragma omp parallel for schedule(static) if (R.size() >= kParallelThreshold)
  for (Index c = 0; c < cols; ++c) {
    const Index jx = c / s.p, ix = c % s.p;
    for (Index j1 = 0; j1 < s.n1; ++j1)
      for (Index j2 = 0; j2 < s.n2; ++j2) {
        const Index src_col = j1 * s.q * s.n2 + jx * s.n2 + j2;
        const Index dst_base = (j1 * s.n2 + j2) * s.m1 * s.m2;
        for (Index i1 = 0; i1 < s.m1; ++i1)
          R.col(c).segment(dst_base + i1 * s.m2, s.m2) =
              A.col(src_col).segment(i1 * s.p * s.m2 + ix * s.m2, s.m2);
      }
  }
  return R;
}

Matrix rearrange3_inv(const Matrix& R, const TripleShape& s) {
  Matrix A(s.rows(), s.cols());
  const Index cols = A.cols();
#pragma omp parallel for schedule(static) if (A.size() >= kParallelThreshold)
  for (Index c = 0; c < cols; ++c) {
    const Index j1 = c / (s.q * s.n2), jx = (c / s.n2) % s.q, j2 = c % s.n2;
    const Index dst_base = (j1 * s.n2 + j2) * s.m1 * s.m2;
    for (Index i1 = 0; i1 < s.m1; ++i1)
      for (Index ix = 0; ix < s.p; ++ix)
        A.col(c).segment(i1 * s.p * s.m2 + ix * s.m2, s.m2) =
            R.col(jx * s.p + ix).segment(dst_base + i1 * s.m2, s.m2);
  }
  return A;
}

Matrix partial_trace(const Matrix& X, Index p) {
  Matrix T(p, p);
#pragma omp parallel for schedule(static) if (X.size() >= kParallelThreshold)
  for (Index b = 0; b < p; ++b) {
    T.col(b).setZero();
    for (Index i = 0; i < p; ++i) T.col(b) += X.col(i * p + b).segment(i * p, p);
  }
  return T;
}

namespace {

// Class means for a labelling (i,j) -> label(i,j) in [0, classes).
template <class Label>
Matrix class_mean(const Matrix& M, Index classes, Label label) {
  const Index m = M.rows(), n = M.cols();
  Vector sum = Vector::Zero(classes), count = Vector::Zero(classes);
  // Accumulation is a reduction into shared bins; it is cheap next to the
  // fill, so it stays serial and the summation order is fixed.
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) {
      const Index k = label(i, j);
      sum(k) += M(i, j);
      count(k) += 1.0;
    }
  const Vector mean = sum.cwiseQuotient(count.cwiseMax(1.0));
  Matrix out(m, n);
#pragma omp parallel for schedule(static) if (M.size() >= kParallelThreshold)
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) out(i, j) = mean(label(i, j));
  return out;
}

}  // namespace

Matrix antidiagonal_mean(const Matrix& M) {
  return class_mean(M, M.rows() + M.cols() - 1, [](Index i, Index j) { return i + j; });
}

Matrix diagonal_mean(const Matrix& M) {
  const Index n = M.cols();
  return class_mean(M, M.rows() + n - 1, [n](Index i, Index j) { return i - j + n - 1; });
}

Matrix circulant_mean(const Matrix& M) {
  const Index n = M.rows();
  return class_mean(M, n, [n](Index i, Index j) { return (j - i + n) % n; });
}

Vector schatten_roots(const Vector& s, double mu, double p) {
  Vector z(s.size());
  const Index n = s.size();
#pragma omp parallel for schedule(static) if (n >= kParallelRoots)
  for (Index i = 0; i < n; ++i) z(i) = scalar_root(s(i), mu, p);
  return z;
}

}  // namespace nearkit::kernels
