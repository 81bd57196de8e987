#include "internal.hpp"

#include "nearkit/errors.hpp"

#include <string>

namespace nearkit {
namespace detail {

namespace {

std::string shape(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

bool identity_pair(const Matrix& B, const Matrix& C) { return is_identity(B) && is_identity(C); }

bool affine_like(const ConstraintSpec& c) {
  return c.is<AffineSubspace>() || c.is<ProductConstraint>() ||
         (c.is<Structural>() && is_subspace(c.as<Structural>().kind));
}

void flatten(const ConstraintSpec& c, std::vector<ConstraintSpec>& out) {
  if (c.is<Intersection>()) {
    for (const auto& m : c.as<Intersection>().members) flatten(m, out);
  } else if (!c.is<Unconstrained>()) {
    out.push_back(c);
  }
}

const KronFactors& checked_factors(const KronFactors& f, const Matrix& B, const Matrix& C) {
  if (!is_kron_of(B, f.B1, f.B2) || !is_kron_of(C, f.C1, f.C2))
    throw DomainError("B and C do not equal the Kronecker products of the supplied factors");
  return f;
}

Impl make_intersection(const Matrix& B, const Matrix& C, const Intersection& in) {
  std::vector<ConstraintSpec> members;
  flatten(in, members);
  if (members.empty()) return make_unconstrained(B, C);
  if (members.size() == 1) return make_solver(B, C, members.front());

  const ConstraintSpec* ball = nullptr;
  const ConstraintSpec* affine = nullptr;
  for (const auto& m : members) {
    if (m.is<FrobeniusBall>()) ball = &m;
    else if (affine_like(m)) affine = &m;
  }
  if (members.size() == 2 && ball && affine) {
    const auto& b = ball->as<FrobeniusBall>();
    return make_lsqi(B, C, affine_param(*affine, B.cols(), C.rows()), b.center, b.radius);
  }
  if (identity_pair(B, C)) {
    return [members](const Matrix& M) { return point_solution(project_intersection(M, members)); };
  }
  throw CapabilityError("intersection '" + kind_name(in) +
                        "' with general multipliers is supported only as (subspace, ball)");
}

}  // namespace

Impl make_solver(const Matrix& B, const Matrix& C, const ConstraintSpec& c) {
  validate(c);
  if (B.rows() < 1 || B.cols() < 1 || C.rows() < 1 || C.cols() < 1)
    throw DomainError("multipliers B and C must be nonempty");
  const Index p = B.cols(), q = C.rows();

  if (c.is<Unconstrained>()) return make_unconstrained(B, C);
  if (c.is<RankAtMost>()) return make_rank(B, C, c.as<RankAtMost>().r);
  if (c.is<PrescribedEigenvalue>()) return make_eigenvalue(B, C, c.as<PrescribedEigenvalue>().lambda);

  if (c.is<KronRankAtMost>()) {
    const auto& k = c.as<KronRankAtMost>();
    if (k.xshape.rows() != p || k.xshape.cols() != q)
      throw DomainError("Kronecker rank: X block shape is not " + shape(p, q));
    if (k.factors) return make_kron_rank(checked_factors(*k.factors, B, C), k.r, k.xshape);
    if (!identity_pair(B, C))
      throw CapabilityError("Kronecker-rank constraint with non-identity B, C needs Kronecker factors");
    return make_kron_rank(identity_factors(k.xshape), k.r, k.xshape);
  }
  if (c.is<PrescribedPartialTrace>()) {
    const auto& t = c.as<PrescribedPartialTrace>();
    if (p != t.p * t.p || q != t.p * t.p) throw DomainError("partial trace: X must be p^2 x p^2");
    if (t.factors) return make_partial_trace(checked_factors(*t.factors, B, C), t.lambda);
    if (!identity_pair(B, C))
      throw CapabilityError("partial-trace constraint with non-identity B, C needs Kronecker factors");
    return make_partial_trace(identity_factors({t.p, t.p, t.p, t.p}), t.lambda);
  }
  if (c.is<AffineSubspace>() || c.is<ProductConstraint>()) return make_affine_subspace(B, C, affine_param(c, p, q));
  if (c.is<Structural>()) {
    const Structure kind = c.as<Structural>().kind;
    if (identity_pair(B, C)) return [kind](const Matrix& M) { return point_solution(project_structure(M, kind)); };
    if (!is_subspace(kind))
      throw CapabilityError("nonnegative constraint with non-identity B, C has no exact solver here");
    return make_affine_subspace(B, C, affine_param(c, p, q));
  }
  if (c.is<FrobeniusBall>()) {
    const auto& b = c.as<FrobeniusBall>();
    if (b.center.rows() != p || b.center.cols() != q) throw DomainError("ball center is not " + shape(p, q));
    if (identity_pair(B, C))
      return [b](const Matrix& M) { return point_solution(project_ball(M, b.center, b.radius)); };
    return make_lsqi(B, C, affine_param(Unconstrained{}, p, q), b.center, b.radius);
  }
  if (c.is<PsdCone>()) {
    if (p != q || C.rows() != B.cols() || C.cols() != B.rows() ||
        (C - B.transpose()).norm() > 1e-12 * (1.0 + B.norm()))
      throw CapabilityError("PSD constraint is supported only with C = B^T");
    return make_psd(B);
  }
  return make_intersection(B, C, c.as<Intersection>());
}

}  // namespace detail

FrobSolver::FrobSolver(Matrix B, Matrix C, ConstraintSpec constraint, AffineTerm term)
    : B_(std::move(B)), C_(std::move(C)), constraint_(std::move(constraint)), term_(std::move(term)) {
  require_finite(B_, "B");
  require_finite(C_, "C");
  impl_ = detail::make_affine_term(B_, C_, term_, constraint_);
}

FrobSolution FrobSolver::solve(const Matrix& M) const {
  if (M.rows() != B_.rows() || M.cols() != C_.cols())
    throw DomainError("right-hand side is " + detail::shape(M.rows(), M.cols()) + ", expected " +
                      detail::shape(B_.rows(), C_.cols()));
  require_finite(M, "right-hand side");
  FrobSolution s = impl_(M);
  if (!all_finite(s.X_star)) throw NumericError("X-step produced a non-finite iterate");
  s.objective = (M - apply_model(B_, s.X_star, C_, term_, s.x_star)).norm();
  return s;
}

FrobSolution solve(const Matrix& M, const Matrix& B, const Matrix& C, const ConstraintSpec& constraint,
                   const AffineTerm& term) {
  return FrobSolver(B, C, constraint, term).solve(M);
}

FrobSolution solve_separable_kron(const Matrix& M, const Matrix& B, const Matrix& C, const ConstraintSpec& inner) {
  if (B.size() == 0 || C.size() == 0 || B.norm() == 0.0 || C.norm() == 0.0)
    throw DomainError("separable Kronecker: B and C must be nonzero");
  const Index rb = B.rows() * C.rows(), cb = B.cols() * C.cols();
  if (M.rows() % rb != 0 || M.cols() % cb != 0)
    throw DomainError("separable Kronecker: M is not (m1 p m2) x (n1 q n2)");
  const TripleShape s{B.rows(), M.rows() / rb, C.rows(), B.cols(), M.cols() / cb, C.cols()};
  const Vector b = vec(kron(B, C));
  const Vector h = rearrange3(M, s).transpose() * b / b.squaredNorm();
  const Matrix H = unvec(h, s.p, s.q);
  FrobSolution out = solve(H, Matrix::Identity(s.p, s.p), Matrix::Identity(s.q, s.q), inner);
  out.objective = (M - kron(B, kron(out.X_star, C))).norm();
  return out;
}

}  // namespace nearkit
