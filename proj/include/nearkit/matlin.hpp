#pragma once

// Dense linear-algebra kernel: SVD with a fixed sign convention, column-major
// vec, Kronecker products, the block rearrangement operators, partial trace,
// and Frobenius projections onto the classical structure subspaces.

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace nearkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// U (m×m) · diag(sigma) · Vᵀ (n×n), sigma nonincreasing of length min(m,n).
struct SvdFactors {
  Matrix U;
  Vector sigma;
  Matrix V;
  Index numerical_rank = 0;

  Matrix reconstruct() const;
};

/// Block partition of an (m1·m2)×(n1·n2) matrix into m1×n1 blocks of size m2×n2.
struct BlockShape {
  Index m1 = 1, m2 = 1, n1 = 1, n2 = 1;

  Index rows() const { return m1 * m2; }
  Index cols() const { return n1 * n2; }
  bool valid() const { return m1 >= 1 && m2 >= 1 && n1 >= 1 && n2 >= 1; }
};

/// Shape of a three-factor Kronecker product Y ⊗ X ⊗ Z with
/// Y m1×n1, X p×q, Z m2×n2.
struct TripleShape {
  Index m1 = 1, p = 1, m2 = 1;
  Index n1 = 1, q = 1, n2 = 1;

  Index rows() const { return m1 * p * m2; }
  Index cols() const { return n1 * q * n2; }
};

/// Rank tolerance: factor · max(m,n) · eps · sigma_1.
double rank_tolerance(Index rows, Index cols, double sigma1, double factor = 1.0);

/// Full SVD. Each left singular vector is signed so that its entry of largest
/// magnitude (first one on ties) is nonnegative; the paired right vector
/// flips with it. Throws NumericError on non-finite input.
SvdFactors svd(const Matrix& M, double rank_tol_factor = 1.0);

Vector vec(const Matrix& X);
Matrix unvec(const Vector& v, Index rows, Index cols);

Matrix kron(const Matrix& A, const Matrix& B);

/// R(Y ⊗ Z) = vec(Z) vec(Y)ᵀ. Output is (m2·n2)×(m1·n1); column j·m1+i holds
/// vec of block (i,j).
Matrix rearrange2(const Matrix& A, const BlockShape& shape);
Matrix rearrange2_inv(const Matrix& R, const BlockShape& shape);

/// R(Y ⊗ X ⊗ Z) = vec(Y ⊗ Z) vec(X)ᵀ. Output is (m1·n1·m2·n2)×(p·q).
Matrix rearrange3(const Matrix& A, const TripleShape& shape);
Matrix rearrange3_inv(const Matrix& R, const TripleShape& shape);

/// Checks the defining identity of rearrange3 on fixed pseudo-random 2×2
/// factors. Returns the largest entrywise error.
double rearrange3_self_test();

/// vec(rearrange2(A)).
Vector vecb(const Matrix& A, const BlockShape& shape);

/// Sum of the p diagonal p×p blocks of a p²×p² matrix.
Matrix partial_trace(const Matrix& X, Index p);

/// Commutation matrix: K · vec(W) = vec(Wᵀ) for W rows×cols.
Matrix commutation_matrix(Index rows, Index cols);

enum class Structure { symmetric, skew, hankel, toeplitz, circulant, nonnegative };

Structure parse_structure(std::string_view name);
std::string_view to_string(Structure s);

/// True for the kinds that are linear subspaces (everything except nonnegative).
bool is_subspace(Structure s);

/// Frobenius-orthogonal projection onto the structure set.
Matrix project_structure(const Matrix& M, Structure s);

/// Frobenius-orthonormal basis of a structure subspace of rows×cols matrices.
std::vector<Matrix> structure_basis(Structure s, Index rows, Index cols);

/// Moore-Penrose pseudoinverse with the SvdFactors rank tolerance.
Matrix pinv(const Matrix& M, double rank_tol_factor = 1.0);

bool all_finite(const Matrix& M);
void require_finite(const Matrix& M, std::string_view what);

inline double fro(const Matrix& M) { return M.norm(); }

}  // namespace nearkit
