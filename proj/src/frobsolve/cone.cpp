#include "internal.hpp"

#include "nearkit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <functional>
#include <memory>

namespace nearkit {

Matrix project_psd(const Matrix& M) {
  if (M.rows() != M.cols()) throw DomainError("PSD projection needs a square matrix");
  const Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
  const Vector lam = es.eigenvalues().cwiseMax(0.0);
  Matrix P = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (P + P.transpose());
}

namespace detail {

Impl make_psd(const Matrix& B) {
  auto b = std::make_shared<const CompactSvd>(compact_svd(B));
  const Index m = B.rows();
  // With B = UΣVᵀ: ‖M − BXBᵀ‖ reduces to ‖UᵀMU − Σ (VᵀXV) Σ‖ on the leading
  // block, and congruence by Σ keeps semidefiniteness.
  return [b, m](const Matrix& M) {
    if (M.rows() != m || M.cols() != m) throw DomainError("PSD congruence: M must be square with B's rows");
    const Vector inv = b->sigma.cwiseInverse();
    const Matrix Y = project_psd(b->U.transpose() * M * b->U);
    Matrix X = b->V * (inv.asDiagonal() * Y * inv.asDiagonal()) * b->V.transpose();
    X = 0.5 * (X + X.transpose());
    return point_solution(X);
  };
}

}  // namespace detail

FrobSolution solve_psd_congruence(const Matrix& M, const Matrix& B) {
  FrobSolution s = detail::make_psd(B)(M);
  s.objective = (M - B * s.X_star * B.transpose()).norm();
  return s;
}

namespace {

using Projector = std::function<Matrix(const Matrix&)>;

Projector projector_for(const ConstraintSpec& c, Index rows, Index cols) {
  if (c.is<Unconstrained>()) return [](const Matrix& X) { return X; };
  if (c.is<Structural>()) {
    const Structure k = c.as<Structural>().kind;
    return [k](const Matrix& X) { return project_structure(X, k); };
  }
  if (c.is<FrobeniusBall>()) {
    const auto& b = c.as<FrobeniusBall>();
    return [center = b.center, r = b.radius](const Matrix& X) { return project_ball(X, center, r); };
  }
  if (c.is<PsdCone>()) return [](const Matrix& X) { return project_psd(X); };
  if (c.is<AffineSubspace>() || c.is<ProductConstraint>()) {
    auto a = std::make_shared<const detail::AffineParam>(detail::affine_param(c, rows, cols));
    return [a](const Matrix& X) { return a->project(X); };
  }
  throw CapabilityError("intersection member '" + kind_name(c) +
                        "' is not a convex set with a Frobenius projection");
}

}  // namespace

Matrix project_intersection(const Matrix& M, const std::vector<ConstraintSpec>& members) {
  if (members.empty()) throw DomainError("intersection needs at least one member");
  std::vector<Projector> proj;
  for (const auto& c : members) proj.push_back(projector_for(c, M.rows(), M.cols()));
  if (proj.size() == 1) return proj.front()(M);

  // Boyle–Dykstra: x ← P_i(x + p_i), p_i ← old(x + p_i) − x.
  const double tol = 1e-12 * (1.0 + M.norm());
  Matrix x = M;
  std::vector<Matrix> inc(proj.size(), Matrix::Zero(M.rows(), M.cols()));
  for (int cycle = 0; cycle < 100000; ++cycle) {
    const Matrix start = x;
    double inc_change = 0.0;
    for (std::size_t i = 0; i < proj.size(); ++i) {
      const Matrix shifted = x + inc[i];
      x = proj[i](shifted);
      const Matrix next = shifted - x;
      inc_change = std::max(inc_change, (next - inc[i]).norm());
      inc[i] = next;
    }
    if ((x - start).norm() <= tol && inc_change <= tol) break;
  }
  return x;
}

}  // namespace nearkit
