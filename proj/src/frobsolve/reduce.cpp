#include "internal.hpp"

#include "nearkit/errors.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>

namespace nearkit {
namespace detail {

CompactSvd compact_svd(const Matrix& M) {
  const SvdFactors f = svd(M);
  const Index r = f.numerical_rank;
  return {f.U.leftCols(r), f.sigma.head(r), f.V.leftCols(r)};
}

CompactSvd compact_svd_kron(const Matrix& P, const Matrix& Q) {
  const CompactSvd p = compact_svd(P), q = compact_svd(Q);
  const Index rp = p.sigma.size(), rq = q.sigma.size();
  CompactSvd out;
  if (rp == 0 || rq == 0) {
    out.U = Matrix(P.rows() * Q.rows(), 0);
    out.V = Matrix(P.cols() * Q.cols(), 0);
    out.sigma = Vector(0);
    return out;
  }
  // (U_P ⊗ U_Q)(Σ_P ⊗ Σ_Q)(V_P ⊗ V_Q)ᵀ, then sort the diagonal.
  const Matrix U = kron(p.U, q.U), V = kron(p.V, q.V);
  Vector s(rp * rq);
  for (Index i = 0; i < rp; ++i) s.segment(i * rq, rq) = p.sigma(i) * q.sigma;
  std::vector<Index> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return s(a) > s(b); });
  const double tau = rank_tolerance(P.rows() * Q.rows(), P.cols() * Q.cols(), s(order.front()));
  Index keep = 0;
  while (keep < s.size() && s(order[static_cast<std::size_t>(keep)]) > tau) ++keep;
  out.U.resize(U.rows(), keep);
  out.V.resize(V.rows(), keep);
  out.sigma.resize(keep);
  for (Index k = 0; k < keep; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.U.col(k) = U.col(src);
    out.V.col(k) = V.col(src);
    out.sigma(k) = s(src);
  }
  return out;
}

Matrix BlockReduction::lift(const Matrix& Y11) const {
  const Matrix Z = b_.sigma.cwiseInverse().asDiagonal() * Y11 * c_.sigma.cwiseInverse().asDiagonal();
  return b_.V * Z * c_.U.transpose();
}

Matrix truncate_rank(const Matrix& A, Index r) {
  if (r >= std::min(A.rows(), A.cols())) return A;
  if (r <= 0) return Matrix::Zero(A.rows(), A.cols());
  const SvdFactors f = svd(A);
  return f.U.leftCols(r) * f.sigma.head(r).asDiagonal() * f.V.leftCols(r).transpose();
}

bool is_identity(const Matrix& B) {
  return B.rows() == B.cols() && (B - Matrix::Identity(B.rows(), B.cols())).cwiseAbs().maxCoeff() == 0.0;
}

bool is_kron_of(const Matrix& K, const Matrix& P, const Matrix& Q) {
  if (K.rows() != P.rows() * Q.rows() || K.cols() != P.cols() * Q.cols()) return false;
  return (K - kron(P, Q)).norm() <= 1e-12 * (1.0 + K.norm());
}

KronFactors identity_factors(const BlockShape& x) {
  return {Matrix::Identity(x.m1, x.m1), Matrix::Identity(x.m2, x.m2), Matrix::Identity(x.n1, x.n1),
          Matrix::Identity(x.n2, x.n2)};
}

namespace {

void require_conformable(const Matrix& B, const Matrix& C) {
  if (B.rows() < 1 || C.cols() < 1 || B.cols() < 1 || C.rows() < 1)
    throw DomainError("multipliers B and C must be nonempty");
}

void require_rhs(const Matrix& M, Index rows, Index cols) {
  if (M.rows() != rows || M.cols() != cols)
    throw DomainError("right-hand side is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                      ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

Impl make_unconstrained(const Matrix& B, const Matrix& C) {
  require_conformable(B, C);
  auto red = std::make_shared<BlockReduction>(compact_svd(B), compact_svd(C));
  const Index m = B.rows(), n = C.cols();
  return [red, m, n](const Matrix& M) {
    require_rhs(M, m, n);
    FrobSolution s;
    s.X_star = red->lift(red->a11(M));
    return s;
  };
}

Impl make_rank(const Matrix& B, const Matrix& C, Index r) {
  require_conformable(B, C);
  if (r < 0) throw DomainError("rank bound must be nonnegative");
  auto red = std::make_shared<BlockReduction>(compact_svd(B), compact_svd(C));
  const Index m = B.rows(), n = C.cols();
  return [red, m, n, r](const Matrix& M) {
    require_rhs(M, m, n);
    FrobSolution s;
    s.X_star = red->lift(truncate_rank(red->a11(M), r));
    return s;
  };
}

Impl make_eigenvalue(const Matrix& B, const Matrix& C, double lambda) {
  if (B.cols() != C.rows()) throw DomainError("prescribed eigenvalue needs a square X (B cols = C rows)");
  const Index p = B.cols();
  // λ ∈ λ(X) iff rank(X − λI) ≤ p − 1.
  Impl rank = make_rank(B, C, p - 1);
  const Matrix shift = lambda * (B * C);
  return [rank, shift, lambda](const Matrix& M) {
    FrobSolution s = rank(M - shift);
    s.X_star.diagonal().array() += lambda;
    return s;
  };
}

Impl make_kron_rank(const KronFactors& f, Index r, const BlockShape& xshape) {
  if (r < 0) throw DomainError("Kronecker rank bound must be nonnegative");
  if (!xshape.valid()) throw DomainError("Kronecker rank: invalid X block shape");
  if (f.B1.cols() != xshape.m1 || f.B2.cols() != xshape.m2 || f.C1.rows() != xshape.n1 ||
      f.C2.rows() != xshape.n2)
    throw DomainError("Kronecker rank: factor shapes do not match the X block shape");
  const BlockShape ashape{f.B1.rows(), f.B2.rows(), f.C1.cols(), f.C2.cols()};
  // ‖A − (B1⊗B2) X (C1⊗C2)‖ = ‖R(A) − (C2ᵀ⊗B2) R(X) (C1⊗B1ᵀ)‖.
  auto red = std::make_shared<BlockReduction>(compact_svd_kron(f.C2.transpose(), f.B2),
                                              compact_svd_kron(f.C1, f.B1.transpose()));
  return [red, ashape, xshape, r](const Matrix& M) {
    require_rhs(M, ashape.rows(), ashape.cols());
    const Matrix RA = rearrange2(M, ashape);
    FrobSolution s;
    s.X_star = rearrange2_inv(red->lift(truncate_rank(red->a11(RA), r)), xshape);
    return s;
  };
}

Impl make_partial_trace(const KronFactors& f, double lambda) {
  const Index p = f.B1.cols();
  if (p < 1 || f.B2.cols() != p || f.C1.rows() != p || f.C2.rows() != p)
    throw DomainError("partial trace: factors must be B1 m1xp, B2 m2xp, C1 pxn1, C2 pxn2");
  const BlockShape ashape{f.B1.rows(), f.B2.rows(), f.C1.cols(), f.C2.cols()};
  const BlockShape xshape{p, p, p, p};
  const Index pp = p * p;
  // trP(X (W⊗I)) = unvec(R(X) K vec(W)) with K the commutation matrix, so the
  // constraint says λ is an eigenvalue of Z = R(X) K. In Z the problem reads
  // ‖R(A) − (C2ᵀ⊗B2) Z (K (C1⊗B1ᵀ))‖ since K² = I.
  const Matrix K = commutation_matrix(p, p);
  CompactSvd right = compact_svd_kron(f.C1, f.B1.transpose());
  right.U = K * right.U;
  const Matrix Kb = kron(f.C2.transpose(), f.B2);
  const Matrix Kc = K * kron(f.C1, f.B1.transpose());
  const Matrix shift = lambda * (Kb * Kc);
  auto red = std::make_shared<BlockReduction>(compact_svd_kron(f.C2.transpose(), f.B2), std::move(right));
  return [red, ashape, xshape, K, shift, lambda, p, pp](const Matrix& M) {
    require_rhs(M, ashape.rows(), ashape.cols());
    const Matrix RA = rearrange2(M, ashape);
    const Matrix Zhat = red->lift(truncate_rank(red->a11(RA - shift), pp - 1));
    Matrix Z = Zhat;
    Z.diagonal().array() += lambda;
    FrobSolution s;
    s.X_star = rearrange2_inv(Z * K, xshape);
    const SvdFactors g = svd(Zhat);
    s.witness = unvec(g.V.col(pp - 1), p, p);
    return s;
  };
}

}  // namespace detail

FrobSolution solve_unconstrained(const Matrix& M, const Matrix& B, const Matrix& C) {
  FrobSolution s = detail::make_unconstrained(B, C)(M);
  s.objective = (M - B * s.X_star * C).norm();
  return s;
}

FrobSolution solve_rank(const Matrix& M, const Matrix& B, const Matrix& C, Index r) {
  if (r < 1) throw DomainError("rank bound must be >= 1");
  FrobSolution s = detail::make_rank(B, C, r)(M);
  s.objective = (M - B * s.X_star * C).norm();
  return s;
}

FrobSolution solve_kron_rank(const Matrix& M, const Matrix& B1, const Matrix& B2, const Matrix& C1,
                             const Matrix& C2, Index r, const BlockShape& xshape) {
  if (r < 1) throw DomainError("Kronecker rank bound must be >= 1");
  FrobSolution s = detail::make_kron_rank({B1, B2, C1, C2}, r, xshape)(M);
  s.objective = (M - kron(B1, B2) * s.X_star * kron(C1, C2)).norm();
  return s;
}

FrobSolution solve_prescribed_eigenvalue(const Matrix& M, const Matrix& B, const Matrix& C, double lambda) {
  FrobSolution s = detail::make_eigenvalue(B, C, lambda)(M);
  s.objective = (M - B * s.X_star * C).norm();
  return s;
}

FrobSolution solve_partial_trace(const Matrix& M, const Matrix& B1, const Matrix& B2, const Matrix& C1,
                                 const Matrix& C2, double lambda) {
  FrobSolution s = detail::make_partial_trace({B1, B2, C1, C2}, lambda)(M);
  s.objective = (M - kron(B1, B2) * s.X_star * kron(C1, C2)).norm();
  return s;
}

}  // namespace nearkit
