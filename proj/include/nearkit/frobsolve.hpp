#pragma once

// Exact minimizers of ‖M − B X C‖_F over X in S.
//
// Where the minimizer is not unique the minimum-norm one is returned: free
// blocks are zero and least-squares coefficients are minimum-norm.

#include "nearkit/constraint.hpp"
#include "nearkit/matlin.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace nearkit {

struct FrobSolution {
  Matrix X_star;
  std::optional<Vector> x_star;    // affine-term coefficient
  std::optional<Matrix> witness;   // W for the partial-trace constraint
  double objective = 0.0;
};

/// Factorizes B, C and the constraint once; solve() can then be called for
/// many right-hand sides M. This is the X-step engine of the Dykstra driver.
class FrobSolver {
 public:
  FrobSolver(Matrix B, Matrix C, ConstraintSpec constraint, AffineTerm term = NoTerm{});

  FrobSolution solve(const Matrix& M) const;

  const Matrix& B() const { return B_; }
  const Matrix& C() const { return C_; }
  const ConstraintSpec& constraint() const { return constraint_; }
  const AffineTerm& term() const { return term_; }
  Index rows() const { return B_.rows(); }
  Index cols() const { return C_.cols(); }

 private:
  Matrix B_, C_;
  ConstraintSpec constraint_;
  AffineTerm term_;
  std::function<FrobSolution(const Matrix&)> impl_;
};

/// (1/cᵀc) B† A c, a minimizer of ‖A − B x cᵀ‖_F.
Vector lemma_rank1(const Matrix& A, const Matrix& B, const Vector& c);

FrobSolution solve_affine(const Matrix& A, const Matrix& B, const Matrix& C, const AffineTerm& term,
                          const ConstraintSpec& inner);

FrobSolution solve_unconstrained(const Matrix& M, const Matrix& B, const Matrix& C);
FrobSolution solve_rank(const Matrix& M, const Matrix& B, const Matrix& C, Index r);

/// Kronecker rank at most r with B = B1 ⊗ B2, C = C1 ⊗ C2; xshape is the block
/// partition of X.
FrobSolution solve_kron_rank(const Matrix& M, const Matrix& B1, const Matrix& B2, const Matrix& C1,
                             const Matrix& C2, Index r, const BlockShape& xshape);

FrobSolution solve_prescribed_eigenvalue(const Matrix& M, const Matrix& B, const Matrix& C,
                                         double lambda);

/// X is p²×p² with p×p blocks; the returned witness W satisfies
/// trP(X (W ⊗ I)) = λ W.
FrobSolution solve_partial_trace(const Matrix& M, const Matrix& B1, const Matrix& B2,
                                 const Matrix& C1, const Matrix& C2, double lambda);

/// min over X in inner of ‖M − B ⊗ X ⊗ C‖_F.
FrobSolution solve_separable_kron(const Matrix& M, const Matrix& B, const Matrix& C,
                                  const ConstraintSpec& inner);

/// spec must hold an AffineSubspace or a ProductConstraint.
FrobSolution solve_affine_subspace(const Matrix& M, const Matrix& B, const Matrix& C,
                                   const ConstraintSpec& spec);

/// min over X ⪰ 0 of ‖M − B X Bᵀ‖_F.
FrobSolution solve_psd_congruence(const Matrix& M, const Matrix& B);

Matrix project_ball(const Matrix& M, const Matrix& center, double radius);

/// min ‖M − B X C‖_F over X = Σ θ_k basis_k with ‖X − center‖_F ≤ radius.
/// The basis must be Frobenius-orthonormal. radius = +inf disables the ball.
FrobSolution lsqi(const Matrix& M, const Matrix& B, const Matrix& C, const std::vector<Matrix>& basis,
                  const Matrix& center, double radius);

/// Nearest point of the intersection of convex members, by Dykstra's
/// alternating projections.
Matrix project_intersection(const Matrix& M, const std::vector<ConstraintSpec>& members);

/// Symmetric part with negative eigenvalues clipped to zero.
Matrix project_psd(const Matrix& M);

/// Throws CapabilityError naming the gap for unsupported (constraint, B, C).
FrobSolution solve(const Matrix& M, const Matrix& B, const Matrix& C, const ConstraintSpec& constraint,
                   const AffineTerm& term = NoTerm{});

}  // namespace nearkit
