#include "nearkit/dykstra.hpp"

#include "../frobsolve/internal.hpp"
#include "nearkit/errors.hpp"
#include "nearkit/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nearkit {

namespace {

bool affine_like(const ConstraintSpec& c) {
  return c.is<AffineSubspace>() || c.is<ProductConstraint>() || c.is<Unconstrained>() ||
         (c.is<Structural>() && is_subspace(c.as<Structural>().kind));
}

// A point of the affine set inside the ball, or nothing when they miss.
std::optional<Matrix> sample_affine_ball(const detail::AffineParam& a, const Matrix& center, double radius,
                                         double scale, Rng& rng) {
  const Vector rel = vec(center - a.offset);
  const Vector theta_c = a.Phi.transpose() * rel;
  const double perp = (rel - a.Phi * theta_c).norm();
  if (perp > radius) return std::nullopt;
  const double rho = std::sqrt(std::max(0.0, radius * radius - perp * perp));
  Vector phi = gaussian_vector(a.Phi.cols(), rng);
  const double n = phi.norm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double len = std::isinf(radius) ? scale : rho * unit(rng);
  if (n > 0.0) phi *= len / n;
  return a.point(theta_c + phi);
}

// Random member of S of the given shape; nullopt when S has no sampler.
std::optional<Matrix> sample_feasible(const ConstraintSpec& c, Index rows, Index cols, double scale, Rng& rng) {
  const double s = scale / std::sqrt(static_cast<double>(rows * cols));
  if (c.is<Unconstrained>()) return s * gaussian(rows, cols, rng);
  if (c.is<RankAtMost>()) {
    const Index r = std::min({c.as<RankAtMost>().r, rows, cols});
    return s * gaussian(rows, r, rng) * gaussian(r, cols, rng) / std::sqrt(static_cast<double>(r));
  }
  if (c.is<PrescribedEigenvalue>()) {
    const Index p = rows;
    Matrix X = s * gaussian(p, p - 1, rng) * gaussian(p - 1, p, rng) / std::sqrt(std::max<double>(1.0, p - 1));
    X.diagonal().array() += c.as<PrescribedEigenvalue>().lambda;
    return X;
  }
  if (c.is<KronRankAtMost>()) {
    const auto& k = c.as<KronRankAtMost>();
    Matrix X = Matrix::Zero(rows, cols);
    for (Index i = 0; i < k.r; ++i)
      X += s * kron(gaussian(k.xshape.m1, k.xshape.n1, rng), gaussian(k.xshape.m2, k.xshape.n2, rng));
    return X;
  }
  if (c.is<PrescribedPartialTrace>()) {
    const auto& t = c.as<PrescribedPartialTrace>();
    const Index pp = t.p * t.p;
    Matrix Z = s * gaussian(pp, pp - 1, rng) * gaussian(pp - 1, pp, rng);
    Z.diagonal().array() += t.lambda;
    return rearrange2_inv(Z * commutation_matrix(t.p, t.p), {t.p, t.p, t.p, t.p});
  }
  if (affine_like(c)) {
    const detail::AffineParam a = detail::affine_param(c, rows, cols);
    return sample_affine_ball(a, a.offset, std::numeric_limits<double>::infinity(), scale, rng);
  }
  if (c.is<Structural>()) return s * gaussian(rows, cols, rng).cwiseAbs();
  if (c.is<PsdCone>()) {
    const Matrix G = gaussian(rows, rows, rng);
    return s * G * G.transpose() / std::sqrt(static_cast<double>(rows));
  }
  if (c.is<FrobeniusBall>()) {
    const auto& b = c.as<FrobeniusBall>();
    return sample_affine_ball(detail::affine_param(Unconstrained{}, rows, cols), b.center, b.radius, scale, rng);
  }
  const auto& m = c.as<Intersection>().members;
  if (m.size() == 2) {
    const ConstraintSpec* ball = m[0].is<FrobeniusBall>() ? &m[0] : m[1].is<FrobeniusBall>() ? &m[1] : nullptr;
    const ConstraintSpec* aff = affine_like(m[0]) ? &m[0] : affine_like(m[1]) ? &m[1] : nullptr;
    if (ball && aff && ball != aff) {
      const auto& b = ball->as<FrobeniusBall>();
      return sample_affine_ball(detail::affine_param(*aff, rows, cols), b.center, b.radius, scale, rng);
    }
  }
  if (m.size() == 1) return sample_feasible(m.front(), rows, cols, scale, rng);
  return std::nullopt;
}

}  // namespace

CertifyResult certify(const NearnessProblem& problem, const SolveReport& report, double mu, std::uint64_t seed,
                      int samples) {
  CertifyResult out;
  const Matrix& Y = report.Y_star;
  Matrix G = mu * report.Delta_star;

  // μΔ is a subgradient of the Y-step penalty. For finite p the penalty is
  // ‖·‖^p, whose subgradients are p‖Y‖^{p−1} times those of the norm.
  if (problem.p.kind() == SchattenP::Kind::finite) {
    const double ny = schatten_norm(Y, problem.p);
    if (ny <= 1e-12) {
      out.certificate = make_certificate(G);
      out.subgradient_ok = G.norm() <= 1e-8;
      out.value = 0.0;
    } else {
      G /= problem.p.value() * std::pow(ny, problem.p.value() - 1.0);
      out.certificate = make_certificate(G);
      const SubgradientCheck chk = check_subgradient(Y, out.certificate, problem.p, 1e-6);
      out.subgradient_ok = chk.ok;
      out.value = chk.value;
    }
  } else {
    out.certificate = make_certificate(G);
    const SubgradientCheck chk = check_subgradient(Y, out.certificate, problem.p, 1e-6);
    out.subgradient_ok = chk.ok;
    out.value = chk.value;
  }

  Rng rng(seed);
  const Matrix model_star = apply_model(problem.B, report.X_star, problem.C, problem.term, report.x_star);
  const double scale = 1.0 + report.X_star.norm();
  out.worst_violation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const auto X = sample_feasible(problem.constraint, problem.x_rows(), problem.x_cols(), scale, rng);
    if (!X) break;
    std::optional<Vector> x;
    if (report.x_star) x = scale * gaussian_vector(report.x_star->size(), rng);
    // tr(Gᵀ B(X* − X)C) with the affine term folded into the model.
    const Matrix D = model_star - apply_model(problem.B, *X, problem.C, problem.term, x);
    const double denom = G.norm() * D.norm();
    const double v = denom > 0.0 ? (G.array() * D.array()).sum() / denom : 0.0;
    out.worst_violation = std::min(out.worst_violation, v);
    out.sampled = true;
  }
  if (!out.sampled) out.worst_violation = 0.0;
  out.ok = out.subgradient_ok && (!out.sampled || out.worst_violation >= -1e-6);
  return out;
}

}  // namespace nearkit
