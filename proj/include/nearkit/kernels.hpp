#pragma once

// Data-parallel inner loops. The top-level functions are OpenMP-parallel; the
// `serial` namespace holds straightforward reference versions that the tests
// compare against and the benchmark times.

#include "nearkit/matlin.hpp"

namespace nearkit::kernels {

/// Below this many output entries the parallel kernels stay single-threaded.
inline constexpr Index kParallelThreshold = 1 << 14;

/// Root solves are ~100x dearer per entry than a copy.
inline constexpr Index kParallelRoots = 128;

Matrix kron(const Matrix& A, const Matrix& B);
Matrix rearrange2(const Matrix& A, const BlockShape& shape);
Matrix rearrange2_inv(const Matrix& R, const BlockShape& shape);
Matrix rearrange3(const Matrix& A, const TripleShape& shape);
Matrix rearrange3_inv(const Matrix& R, const TripleShape& shape);
Matrix partial_trace(const Matrix& X, Index p);

/// Replace every entry by the mean over its class; the class of (i,j) is
/// i+j (hankel), i-j (toeplitz) or (j-i) mod n (circulant).
Matrix antidiagonal_mean(const Matrix& M);
Matrix diagonal_mean(const Matrix& M);
Matrix circulant_mean(const Matrix& M);

/// Per-entry roots of p z^{p-1} + mu (z - s) = 0.
Vector schatten_roots(const Vector& s, double mu, double p);

namespace serial {

Matrix kron(const Matrix& A, const Matrix& B);
Matrix rearrange2(const Matrix& A, const BlockShape& shape);
Matrix rearrange2_inv(const Matrix& R, const BlockShape& shape);
Matrix rearrange3(const Matrix& A, const TripleShape& shape);
Matrix rearrange3_inv(const Matrix& R, const TripleShape& shape);
Matrix partial_trace(const Matrix& X, Index p);
Matrix antidiagonal_mean(const Matrix& M);
Matrix diagonal_mean(const Matrix& M);
Matrix circulant_mean(const Matrix& M);
Vector schatten_roots(const Vector& s, double mu, double p);

}  // namespace serial

}  // namespace nearkit::kernels
