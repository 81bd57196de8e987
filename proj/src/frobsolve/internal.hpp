#pragma once

#include "nearkit/frobsolve.hpp"

#include <functional>

namespace nearkit::detail {

using Impl = std::function<FrobSolution(const Matrix&)>;

inline FrobSolution point_solution(Matrix X) {
  FrobSolution s;
  s.X_star = std::move(X);
  return s;
}

/// Rank-revealing thin SVD: U (m×r), sigma (r), V (n×r), r = numerical rank.
struct CompactSvd {
  Matrix U;
  Vector sigma;
  Matrix V;
};

CompactSvd compact_svd(const Matrix& M);

/// Compact SVD of P ⊗ Q assembled from the factor SVDs.
CompactSvd compact_svd_kron(const Matrix& P, const Matrix& Q);

/// With B = U_B Σ_B V_Bᵀ and C = U_C Σ_C V_Cᵀ (compact), ‖M − BXC‖ splits into
/// ‖A11 − Σ_B Z Σ_C‖ on the reachable block plus a constant, where
/// A11 = U_Bᵀ M V_C and Z = V_Bᵀ X U_C.
class BlockReduction {
 public:
  BlockReduction(CompactSvd b, CompactSvd c) : b_(std::move(b)), c_(std::move(c)) {}

  Matrix a11(const Matrix& M) const { return b_.U.transpose() * M * c_.V; }
  /// Minimum-norm X whose reachable block reproduces Y11.
  Matrix lift(const Matrix& Y11) const;
  Index s() const { return b_.sigma.size(); }
  Index t() const { return c_.sigma.size(); }
  const CompactSvd& b() const { return b_; }
  const CompactSvd& c() const { return c_; }

 private:
  CompactSvd b_, c_;
};

/// Best rank-r approximation (r may be 0).
Matrix truncate_rank(const Matrix& A, Index r);

bool is_identity(const Matrix& B);
bool is_kron_of(const Matrix& K, const Matrix& P, const Matrix& Q);

/// offset + span(unvec of Phi's orthonormal columns).
struct AffineParam {
  Matrix offset;
  Matrix Phi;

  Matrix point(const Vector& theta) const;
  Matrix project(const Matrix& X) const;
};

/// Parameterization of AffineSubspace, ProductConstraint or a subspace
/// Structural kind, for X of the given shape.
AffineParam affine_param(const ConstraintSpec& c, Index rows, Index cols);

/// Columns vec(B unvec(Phi_k) C).
Matrix image_basis(const Matrix& B, const Matrix& C, const Matrix& Phi, Index rows, Index cols);

Impl make_unconstrained(const Matrix& B, const Matrix& C);
Impl make_rank(const Matrix& B, const Matrix& C, Index r);
Impl make_eigenvalue(const Matrix& B, const Matrix& C, double lambda);
Impl make_kron_rank(const KronFactors& f, Index r, const BlockShape& xshape);
Impl make_partial_trace(const KronFactors& f, double lambda);
Impl make_affine_subspace(const Matrix& B, const Matrix& C, AffineParam param);
Impl make_psd(const Matrix& B);
Impl make_lsqi(const Matrix& B, const Matrix& C, AffineParam param, const Matrix& center, double radius);
Impl make_affine_term(const Matrix& B, const Matrix& C, const AffineTerm& term, const ConstraintSpec& inner);
Impl make_solver(const Matrix& B, const Matrix& C, const ConstraintSpec& constraint);

KronFactors identity_factors(const BlockShape& xshape);

}  // namespace nearkit::detail
