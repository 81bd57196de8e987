#include "internal.hpp"

#include "nearkit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace nearkit {

std::string kind_name(const ConstraintSpec& c) {
  if (c.is<Unconstrained>()) return "unconstrained";
  if (c.is<RankAtMost>()) return "rank";
  if (c.is<KronRankAtMost>()) return "kron_rank";
  if (c.is<PrescribedEigenvalue>()) return "eigenvalue";
  if (c.is<PrescribedPartialTrace>()) return "partial_trace";
  if (c.is<AffineSubspace>()) return "affine";
  if (c.is<ProductConstraint>()) return "product";
  if (c.is<Structural>()) return std::string(to_string(c.as<Structural>().kind));
  if (c.is<FrobeniusBall>()) return "ball";
  if (c.is<PsdCone>()) return "psd";
  std::string s = "intersection(";
  const auto& m = c.as<Intersection>().members;
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + kind_name(m[i]);
  return s + ")";
}

namespace {

void check_factors(const KronFactors& f, Index m1, Index m2, Index n1, Index n2, const char* what) {
  if (f.B1.cols() != m1 || f.B2.cols() != m2 || f.C1.rows() != n1 || f.C2.rows() != n2)
    throw DomainError(std::string(what) + ": Kronecker factor shapes do not match X");
}

}  // namespace

void validate(const ConstraintSpec& c) {
  if (c.is<RankAtMost>()) {
    if (c.as<RankAtMost>().r < 1) throw DomainError("rank bound must be >= 1");
  } else if (c.is<KronRankAtMost>()) {
    const auto& k = c.as<KronRankAtMost>();
    if (k.r < 1) throw DomainError("Kronecker rank bound must be >= 1");
    if (!k.xshape.valid()) throw DomainError("Kronecker rank: invalid X block shape");
    if (k.factors) check_factors(*k.factors, k.xshape.m1, k.xshape.m2, k.xshape.n1, k.xshape.n2, "Kronecker rank");
  } else if (c.is<PrescribedPartialTrace>()) {
    const auto& t = c.as<PrescribedPartialTrace>();
    if (t.p < 1) throw DomainError("partial trace: p must be >= 1");
    if (t.factors) check_factors(*t.factors, t.p, t.p, t.p, t.p, "partial trace");
  } else if (c.is<AffineSubspace>()) {
    const auto& a = c.as<AffineSubspace>();
    (void)detail::affine_param(c, a.offset.rows(), a.offset.cols());
  } else if (c.is<ProductConstraint>()) {
    const auto& pc = c.as<ProductConstraint>();
    if (pc.F.rows() != pc.H.rows() || pc.G.cols() != pc.H.cols())
      throw DomainError("product constraint: F, G, H shapes do not conform");
  } else if (c.is<FrobeniusBall>()) {
    const auto& b = c.as<FrobeniusBall>();
    if (!(b.radius >= 0.0)) throw DomainError("ball radius must be nonnegative");
    require_finite(b.center, "ball center");
  } else if (c.is<Intersection>()) {
    const auto& m = c.as<Intersection>().members;
    if (m.empty()) throw DomainError("intersection needs at least one member");
    for (const auto& x : m) validate(x);
  }
}

bool is_convex(const ConstraintSpec& c) {
  if (c.is<RankAtMost>() || c.is<KronRankAtMost>() || c.is<PrescribedEigenvalue>() ||
      c.is<PrescribedPartialTrace>())
    return false;
  if (c.is<Intersection>()) {
    const auto& m = c.as<Intersection>().members;
    return std::all_of(m.begin(), m.end(), [](const ConstraintSpec& x) { return is_convex(x); });
  }
  return true;
}

namespace {

double sigma_after(const Matrix& X, Index r) {
  const Vector s = svd(X).sigma;
  return r < s.size() ? s(r) : 0.0;
}

double sigma_min(const Matrix& X) {
  const Vector s = svd(X).sigma;
  return s.size() ? s(s.size() - 1) : 0.0;
}

}  // namespace

double constraint_violation(const ConstraintSpec& c, const Matrix& X) {
  if (c.is<Unconstrained>()) return 0.0;
  if (c.is<RankAtMost>()) return sigma_after(X, c.as<RankAtMost>().r);
  if (c.is<KronRankAtMost>()) {
    const auto& k = c.as<KronRankAtMost>();
    return sigma_after(rearrange2(X, k.xshape), k.r);
  }
  if (c.is<PrescribedEigenvalue>()) {
    if (X.rows() != X.cols()) throw DomainError("eigenvalue constraint needs a square X");
    return sigma_min(X - c.as<PrescribedEigenvalue>().lambda * Matrix::Identity(X.rows(), X.cols()));
  }
  if (c.is<PrescribedPartialTrace>()) {
    const auto& t = c.as<PrescribedPartialTrace>();
    const Index pp = t.p * t.p;
    const Matrix Z = rearrange2(X, {t.p, t.p, t.p, t.p}) * commutation_matrix(t.p, t.p);
    return sigma_min(Z - t.lambda * Matrix::Identity(pp, pp));
  }
  if (c.is<AffineSubspace>() || (c.is<Structural>() && is_subspace(c.as<Structural>().kind))) {
    return (X - detail::affine_param(c, X.rows(), X.cols()).project(X)).norm();
  }
  if (c.is<Structural>()) return (X - project_structure(X, c.as<Structural>().kind)).norm();
  if (c.is<ProductConstraint>()) {
    const auto& pc = c.as<ProductConstraint>();
    return (pc.F * X * pc.G - pc.H).norm();
  }
  if (c.is<FrobeniusBall>()) {
    const auto& b = c.as<FrobeniusBall>();
    if (std::isinf(b.radius)) return 0.0;
    return std::max(0.0, (X - b.center).norm() - b.radius);
  }
  if (c.is<PsdCone>()) return (X - project_psd(X)).norm();
  double worst = 0.0;
  for (const auto& m : c.as<Intersection>().members) worst = std::max(worst, constraint_violation(m, X));
  return worst;
}

Matrix apply_model(const Matrix& B, const Matrix& X, const Matrix& C, const AffineTerm& term,
                   const std::optional<Vector>& x) {
  Matrix out = B * X * C;
  if (!x) return out;
  if (const auto* l = std::get_if<LeftRankOne>(&term)) out -= l->D * *x * l->e.transpose();
  else if (const auto* r = std::get_if<RightRankOne>(&term)) out -= r->d * x->transpose() * r->E;
  return out;
}

}  // namespace nearkit
