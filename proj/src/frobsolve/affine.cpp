#include "internal.hpp"

#include "nearkit/errors.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace nearkit {
namespace detail {

Matrix AffineParam::point(const Vector& theta) const {
  return offset + unvec(Phi * theta, offset.rows(), offset.cols());
}

Matrix AffineParam::project(const Matrix& X) const {
  if (Phi.cols() == 0) return offset;
  return point(Phi.transpose() * vec(X - offset));
}

namespace {

Matrix stack(const std::vector<Matrix>& basis, Index rows, Index cols) {
  Matrix S(rows * cols, static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].rows() != rows || basis[k].cols() != cols)
      throw DomainError("affine subspace: basis element " + std::to_string(k) + " has the wrong shape");
    S.col(static_cast<Index>(k)) = vec(basis[k]);
  }
  return S;
}

}  // namespace

AffineParam affine_param(const ConstraintSpec& c, Index rows, Index cols) {
  AffineParam a;
  if (c.is<AffineSubspace>()) {
    const auto& s = c.as<AffineSubspace>();
    if (s.offset.rows() != rows || s.offset.cols() != cols)
      throw DomainError("affine subspace: offset shape does not match X");
    a.offset = s.offset;
    const Matrix S = stack(s.basis, rows, cols);
    if (S.cols() == 0) {
      a.Phi = Matrix(rows * cols, 0);
      return a;
    }
    const SvdFactors f = svd(S);
    if (f.numerical_rank < S.cols()) throw DomainError("affine subspace: basis is linearly dependent");
    a.Phi = f.U.leftCols(S.cols());
    return a;
  }
  if (c.is<ProductConstraint>()) {
    const auto& pc = c.as<ProductConstraint>();
    const Matrix& F = pc.F;
    const Matrix& G = pc.G;
    const Matrix& H = pc.H;
    if (F.cols() != rows || G.rows() != cols || F.rows() != H.rows() || G.cols() != H.cols())
      throw DomainError("product constraint: F, G, H shapes do not fit X");
    const Matrix Fp = pinv(F), Gp = pinv(G);
    const double gap = (F * Fp * H * Gp * G - H).norm();
    if (gap > 1e-10 * (1.0 + H.norm()))
      throw InfeasibleError("product constraint FXG = H is inconsistent (residual " + std::to_string(gap) + ")");
    a.offset = Fp * H * Gp;
    // FXG = 0 iff (V_Fᵀ X U_G)_{ij} = 0 for i < rank F and j < rank G.
    const SvdFactors sf = svd(F), sg = svd(G);
    const Index rf = sf.numerical_rank, rg = sg.numerical_rank;
    const Index k = rows * cols - rf * rg;
    a.Phi.resize(rows * cols, k);
    Index col = 0;
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) {
        if (i < rf && j < rg) continue;
        a.Phi.col(col++) = vec(sf.V.col(i) * sg.U.col(j).transpose());
      }
    return a;
  }
  if (c.is<Structural>() && is_subspace(c.as<Structural>().kind)) {
    a.offset = Matrix::Zero(rows, cols);
    a.Phi = stack(structure_basis(c.as<Structural>().kind, rows, cols), rows, cols);
    return a;
  }
  if (c.is<Unconstrained>()) {
    a.offset = Matrix::Zero(rows, cols);
    a.Phi = Matrix::Identity(rows * cols, rows * cols);
    return a;
  }
  throw DomainError("constraint '" + kind_name(c) + "' is not an affine subspace");
}

Matrix image_basis(const Matrix& B, const Matrix& C, const Matrix& Phi, Index rows, Index cols) {
  Matrix K(B.rows() * C.cols(), Phi.cols());
  for (Index k = 0; k < Phi.cols(); ++k) K.col(k) = vec(B * unvec(Phi.col(k), rows, cols) * C);
  return K;
}

Impl make_affine_subspace(const Matrix& B, const Matrix& C, AffineParam param) {
  auto a = std::make_shared<const AffineParam>(std::move(param));
  if (is_identity(B) && is_identity(C)) return [a](const Matrix& M) { return point_solution(a->project(M)); };
  const Index rows = B.cols(), cols = C.rows();
  const Vector shift = vec(B * a->offset * C);
  if (a->Phi.cols() == 0) return [a](const Matrix&) { return point_solution(a->offset); };
  auto cod = std::make_shared<Eigen::CompleteOrthogonalDecomposition<Matrix>>(
      image_basis(B, C, a->Phi, rows, cols));
  return [a, cod, shift](const Matrix& M) {
    const Vector theta = cod->solve(Vector(vec(M) - shift));
    return point_solution(a->point(theta));
  };
}

namespace {

// φ(ν) = Σ s_i c_i / (s_i² + ν) v_i, written in the coefficient basis.
struct Secular {
  const Vector& s;
  const Vector& c;

  double norm2(double nu) const {
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) {
      const double w = s(i) * c(i) / (s(i) * s(i) + nu);
      acc += w * w;
    }
    return acc;
  }
  double dnorm2(double nu) const {
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) {
      const double d = s(i) * s(i) + nu;
      acc += -2.0 * s(i) * s(i) * c(i) * c(i) / (d * d * d);
    }
    return acc;
  }
};

}  // namespace

Impl make_lsqi(const Matrix& B, const Matrix& C, AffineParam param, const Matrix& center, double radius) {
  if (!(radius >= 0.0)) throw DomainError("ball radius must be nonnegative");
  auto a = std::make_shared<const AffineParam>(std::move(param));
  if (center.rows() != a->offset.rows() || center.cols() != a->offset.cols())
    throw DomainError("ball center shape does not match X");
  const Index rows = a->offset.rows(), cols = a->offset.cols();
  // X = offset + Φθ, θ = θc + φ with Φθc the part of (center − offset) in the
  // span; the rest c⊥ is orthogonal, so ‖X − center‖² = ‖φ‖² + ‖c⊥‖².
  const Vector rel = vec(center - a->offset);
  const Vector theta_c = a->Phi.transpose() * rel;
  const double perp = (rel - a->Phi * theta_c).norm();
  double rho = std::numeric_limits<double>::infinity();
  if (std::isfinite(radius)) {
    const double slack = 1e-12 * (1.0 + center.norm());
    if (perp > radius + slack)
      throw InfeasibleError("ball does not meet the subspace (distance " + std::to_string(perp) + " > radius " +
                            std::to_string(radius) + ")");
    rho = perp >= radius ? 0.0 : std::sqrt(radius * radius - perp * perp);
  }
  const Matrix K = image_basis(B, C, a->Phi, rows, cols);
  struct Prep {
    Matrix U, V;
    Vector s;
    Vector base;  // vec(B offset C) + K θc
    Vector theta_c;
    double rho;
    double tol;
  };
  auto prep = std::make_shared<Prep>();
  if (K.cols() > 0) {
    Eigen::JacobiSVD<Matrix> f(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
    prep->U = f.matrixU();
    prep->V = f.matrixV();
    prep->s = f.singularValues();
    prep->tol = prep->s.size() ? rank_tolerance(K.rows(), K.cols(), prep->s(0)) : 0.0;
  }
  prep->base = vec(B * a->offset * C) + K * theta_c;
  prep->theta_c = theta_c;
  prep->rho = rho;
  return [a, prep](const Matrix& M) {
    const Prep& P = *prep;
    if (P.s.size() == 0 || P.rho == 0.0) return point_solution(a->point(P.theta_c));
    const Vector c = P.U.transpose() * (vec(M) - P.base);
    Vector w(P.s.size());
    for (Index i = 0; i < w.size(); ++i) w(i) = P.s(i) > P.tol ? c(i) / P.s(i) : 0.0;
    if (w.norm() <= P.rho) return point_solution(a->point(P.theta_c + P.V * w));

    // Active ball: find ν > 0 with ‖φ(ν)‖ = ρ. ‖φ(ν)‖ ≤ ‖Kᵀr‖/ν, so
    // ν = ‖Kᵀr‖/ρ brackets the root from above.
    const Secular sec{P.s, c};
    const double target = P.rho * P.rho;
    double lo = 0.0, hi = P.s.cwiseProduct(c).norm() / P.rho;
    if (!(hi > 0.0) || sec.norm2(hi) > target * (1.0 + 1e-12))
      throw NumericError("lsqi: failed to bracket the secular equation");
    double nu = hi;
    for (int it = 0; it < 200; ++it) {
      const double f = sec.norm2(nu) - target;
      if (std::abs(f) <= 1e-15 * target) break;
      if (f > 0.0) lo = nu;
      else hi = nu;
      double next = nu - f / sec.dnorm2(nu);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 1e-16 * hi) break;
      nu = next;
    }
    for (Index i = 0; i < w.size(); ++i) w(i) = P.s(i) * c(i) / (P.s(i) * P.s(i) + nu);
    // Round-off can leave ‖φ‖ a hair above ρ; pull it back onto the sphere.
    const double nw = w.norm();
    if (nw > P.rho) w *= P.rho / nw;
    return point_solution(a->point(P.theta_c + P.V * w));
  };
}

Impl make_affine_term(const Matrix& B, const Matrix& C, const AffineTerm& term, const ConstraintSpec& inner) {
  if (const auto* left = std::get_if<LeftRankOne>(&term)) {
    const Index n = C.cols(), m = B.rows();
    if (left->e.size() != n) throw DomainError("affine term: e must have as many entries as A has columns");
    if (left->D.rows() != m || left->D.cols() != m) throw DomainError("affine term: D must be square with A's rows");
    const double ee = left->e.squaredNorm();
    if (ee == 0.0) throw DomainError("affine term: e must be nonzero");
    if (svd(left->D).numerical_rank < m) throw DomainError("affine term: D is singular");
    const Matrix P = Matrix::Identity(n, n) - left->e * left->e.transpose() / ee;
    Impl inner_solver = make_solver(B, C * P, inner);
    const Matrix Dp = pinv(left->D);
    const Vector e = left->e;
    return [inner_solver, P, Dp, e, ee, B, C](const Matrix& M) {
      FrobSolution s = inner_solver(M * P);
      s.x_star = Vector(Dp * ((B * s.X_star * C - M) * e) / ee);
      return s;
    };
  }
  if (const auto* right = std::get_if<RightRankOne>(&term)) {
    const Index n = C.cols(), m = B.rows();
    if (right->d.size() != m) throw DomainError("affine term: d must have as many entries as A has rows");
    if (right->E.rows() != n || right->E.cols() != n)
      throw DomainError("affine term: E must be square with A's columns");
    const double dd = right->d.squaredNorm();
    if (dd == 0.0) throw DomainError("affine term: d must be nonzero");
    if (svd(right->E).numerical_rank < n) throw DomainError("affine term: E is singular");
    const Matrix P = Matrix::Identity(m, m) - right->d * right->d.transpose() / dd;
    Impl inner_solver = make_solver(P * B, C, inner);
    const Matrix Etp = pinv(right->E.transpose());
    const Vector d = right->d;
    return [inner_solver, P, Etp, d, dd, B, C](const Matrix& M) {
      FrobSolution s = inner_solver(P * M);
      s.x_star = Vector(Etp * ((B * s.X_star * C - M).transpose() * d) / dd);
      return s;
    };
  }
  return make_solver(B, C, inner);
}

}  // namespace detail

Vector lemma_rank1(const Matrix& A, const Matrix& B, const Vector& c) {
  const double cc = c.squaredNorm();
  if (cc == 0.0) throw DomainError("lemma_rank1: c must be nonzero");
  if (A.rows() != B.rows() || A.cols() != c.size()) throw DomainError("lemma_rank1: shapes do not conform");
  return pinv(B) * (A * c) / cc;
}

Matrix project_ball(const Matrix& M, const Matrix& center, double radius) {
  if (!(radius >= 0.0)) throw DomainError("ball radius must be nonnegative");
  if (M.rows() != center.rows() || M.cols() != center.cols())
    throw DomainError("ball center shape does not match");
  const Matrix d = M - center;
  const double n = d.norm();
  if (n <= radius) return M;
  return center + (radius / n) * d;
}

FrobSolution lsqi(const Matrix& M, const Matrix& B, const Matrix& C, const std::vector<Matrix>& basis,
                  const Matrix& center, double radius) {
  detail::AffineParam a;
  a.offset = Matrix::Zero(B.cols(), C.rows());
  a.Phi.resize(B.cols() * C.rows(), static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].rows() != B.cols() || basis[k].cols() != C.rows())
      throw DomainError("lsqi: basis element shape does not match X");
    a.Phi.col(static_cast<Index>(k)) = vec(basis[k]);
  }
  const Matrix gram = a.Phi.transpose() * a.Phi;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).norm() > 1e-10)
    throw DomainError("lsqi: basis is not Frobenius-orthonormal");
  FrobSolution s = detail::make_lsqi(B, C, std::move(a), center, radius)(M);
  s.objective = (M - B * s.X_star * C).norm();
  return s;
}

FrobSolution solve_affine_subspace(const Matrix& M, const Matrix& B, const Matrix& C, const ConstraintSpec& spec) {
  if (!spec.is<AffineSubspace>() && !spec.is<ProductConstraint>())
    throw DomainError("solve_affine_subspace needs an affine subspace or a product constraint");
  FrobSolution s = detail::make_affine_subspace(B, C, detail::affine_param(spec, B.cols(), C.rows()))(M);
  s.objective = (M - B * s.X_star * C).norm();
  return s;
}

FrobSolution solve_affine(const Matrix& A, const Matrix& B, const Matrix& C, const AffineTerm& term,
                          const ConstraintSpec& inner) {
  if (!has_term(term)) throw DomainError("solve_affine needs an affine term");
  FrobSolution s = detail::make_affine_term(B, C, term, inner)(A);
  s.objective = (A - apply_model(B, s.X_star, C, term, s.x_star)).norm();
  return s;
}

}  // namespace nearkit
