#include "nearkit/errors.hpp"
#include "nearkit/frobsolve.hpp"
#include "nearkit/random.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <limits>

using namespace nearkit;

namespace {

double max_abs(const Matrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

Matrix orthogonal(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  return qr.householderQ();
}

double tail_norm(const Vector& s, Index r) {
  return r < s.size() ? s.tail(s.size() - r).norm() : 0.0;
}

/// Vectorized operator of X ↦ B X C.
Matrix op(const Matrix& B, const Matrix& C) { return kron(C.transpose(), B); }

}  // namespace

TEST_SUITE("frobsolve") {
  TEST_CASE("unconstrained matches the vectorized least-squares oracle") {
    Rng rng(41);
    for (int t = 0; t < 4; ++t) {
      // Rank-deficient, rectangular multipliers.
      const Matrix B = gaussian(6, 2, rng) * gaussian(2, 4, rng);
      const Matrix C = gaussian(3, 3, rng) * gaussian(3, 5, rng);
      const Matrix M = gaussian(6, 5, rng);
      const FrobSolution s = solve_unconstrained(M, B, C);
      const Matrix X = oracle::vectorized_nearness(M, B, C);
      CHECK(s.objective == doctest::Approx((M - B * X * C).norm()).epsilon(1e-10));
      // Minimum-norm solutions coincide.
      CHECK(max_abs(s.X_star - X) <= 1e-9 * (1 + X.norm()));
    }
  }

  TEST_CASE("unconstrained with identities returns M") {
    const Matrix M = (Matrix(2, 2) << 1, 2, 3, 4).finished();
    const FrobSolution s = solve(M, Matrix::Identity(2, 2), Matrix::Identity(2, 2), Unconstrained{});
    CHECK(max_abs(s.X_star - M) <= 1e-15);
    CHECK(s.objective <= 1e-15);
  }

  TEST_CASE("rank constraint: Eckart-Young with orthogonal multipliers") {
    Rng rng(42);
    const Matrix M = gaussian(5, 5, rng);
    const Matrix U = orthogonal(5, rng), V = orthogonal(5, rng);
    for (Index r : {1, 2, 4}) {
      const FrobSolution s = solve_rank(M, U, V, r);
      CHECK(s.objective == doctest::Approx(tail_norm(oracle::singular_values(M), r)).epsilon(1e-10));
      CHECK(constraint_violation(RankAtMost{r}, s.X_star) <= 1e-12);
    }
  }

  TEST_CASE("rank constraint with general B, C beats feasible competitors") {
    Rng rng(43);
    const Matrix B = gaussian(6, 4, rng), C = gaussian(4, 5, rng), M = gaussian(6, 5, rng);
    const FrobSolution s = solve_rank(M, B, C, 2);
    CHECK(constraint_violation(RankAtMost{2}, s.X_star) <= 1e-10);
    const SvdFactors f = svd(s.X_star);
    const Matrix L = f.U.leftCols(2) * f.sigma.head(2).asDiagonal(), R = f.V.leftCols(2);
    for (int t = 0; t < 200; ++t) {
      const Matrix X = (L + 1e-2 * gaussian(4, 2, rng)) * (R + 1e-2 * gaussian(4, 2, rng)).transpose();
      const Matrix Y = gaussian(4, 2, rng) * gaussian(2, 4, rng);
      CHECK(s.objective <= (M - B * X * C).norm() + 1e-12);
      CHECK(s.objective <= (M - B * Y * C).norm() + 1e-12);
    }
  }

  TEST_CASE("prescribed eigenvalue: distance is sigma_min(M - lambda I)") {
    Rng rng(44);
    const Matrix M = gaussian(4, 4, rng);
    for (double lambda : {-1.0, 0.0, 2.5}) {
      const FrobSolution s = solve_prescribed_eigenvalue(M, Matrix::Identity(4, 4), Matrix::Identity(4, 4), lambda);
      const Vector sv = oracle::singular_values(M - lambda * Matrix::Identity(4, 4));
      CHECK(s.objective == doctest::Approx(sv(3)).epsilon(1e-10));
      Eigen::EigenSolver<Matrix> es(s.X_star);
      double closest = 1e300;
      for (Index i = 0; i < 4; ++i) closest = std::min(closest, std::abs(es.eigenvalues()(i) - lambda));
      CHECK(closest <= 1e-8);
    }
  }

  TEST_CASE("prescribed eigenvalue of a 2x2 example") {
    // diag(3, 1) nearest with eigenvalue 0 zeroes the smaller entry.
    const Matrix M = (Matrix(2, 2) << 3, 0, 0, 1).finished();
    const FrobSolution s = solve_prescribed_eigenvalue(M, Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0);
    CHECK(max_abs(s.X_star - (Matrix(2, 2) << 3, 0, 0, 0).finished()) <= 1e-15);
    CHECK(s.objective == doctest::Approx(1.0));
  }

  TEST_CASE("Kronecker rank with identity factors is a truncated SVD of R(M)") {
    Rng rng(45);
    const BlockShape xs{2, 3, 3, 2};
    const Matrix M = gaussian(xs.rows(), xs.cols(), rng);
    const Matrix I1 = Matrix::Identity(2, 2), I2 = Matrix::Identity(3, 3), J1 = Matrix::Identity(3, 3),
                 J2 = Matrix::Identity(2, 2);
    const Vector sv = oracle::singular_values(rearrange2(M, xs));
    for (Index r : {1, 2}) {
      const FrobSolution s = solve_kron_rank(M, I1, I2, J1, J2, r, xs);
      CHECK(s.objective == doctest::Approx(tail_norm(sv, r)).epsilon(1e-10));
      CHECK(constraint_violation(KronRankAtMost{r, xs, {}}, s.X_star) <= 1e-12);
    }
  }

  TEST_CASE("Kronecker rank at full rank with general factors equals the vectorized oracle") {
    Rng rng(46);
    const Matrix B1 = gaussian(3, 2, rng), B2 = gaussian(2, 2, rng), C1 = gaussian(2, 2, rng),
                 C2 = gaussian(2, 3, rng);
    const BlockShape xs{2, 2, 2, 2};
    const Matrix B = kron(B1, B2), C = kron(C1, C2);
    const Matrix M = gaussian(B.rows(), C.cols(), rng);
    const FrobSolution s = solve_kron_rank(M, B1, B2, C1, C2, 4, xs);
    const Matrix X = oracle::vectorized_nearness(M, B, C);
    CHECK(s.objective == doctest::Approx((M - B * X * C).norm()).epsilon(1e-10));
    // A rank-1 bound cannot do better than the unconstrained optimum.
    CHECK(solve_kron_rank(M, B1, B2, C1, C2, 1, xs).objective >= s.objective - 1e-12);
  }

  TEST_CASE("partial trace: witness and corrected distance formula") {
    Rng rng(47);
    const Index p = 2;
    const Matrix I = Matrix::Identity(p, p);
    const Matrix M = gaussian(p * p, p * p, rng);
    for (double lambda : {0.0, 1.3}) {
      const FrobSolution s = solve_partial_trace(M, I, I, I, I, lambda);
      REQUIRE(s.witness);
      const Matrix& W = *s.witness;
      CHECK(W.norm() == doctest::Approx(1.0));
      CHECK(max_abs(partial_trace(s.X_star * kron(W, I), p) - lambda * W) <= 1e-10);
      // R is an isometry and K is orthogonal, so the distance is the
      // smallest singular value of R(M) K − λI.
      const Matrix Z = rearrange2(M, {p, p, p, p}) * commutation_matrix(p, p);
      const Vector sv = oracle::singular_values(Z - lambda * Matrix::Identity(p * p, p * p));
      CHECK(s.objective == doctest::Approx(sv(p * p - 1)).epsilon(1e-10));
    }
  }

  TEST_CASE("partial trace beats Kronecker-product feasible points") {
    Rng rng(48);
    const Matrix I = Matrix::Identity(2, 2);
    const Matrix M = gaussian(4, 4, rng);
    const double lambda = 0.7;
    const FrobSolution s = solve_partial_trace(M, I, I, I, I, lambda);
    for (int t = 0; t < 100; ++t) {
      // X = Y ⊗ W with tr(Y W) = λ is feasible.
      const Matrix W = gaussian(2, 2, rng);
      Matrix Y = gaussian(2, 2, rng);
      Y += (lambda - (Y * W).trace()) / W.squaredNorm() * W.transpose();
      const Matrix X = kron(Y, W);
      CHECK(max_abs(partial_trace(X * kron(W, I), 2) - lambda * W) <= 1e-10 * (1 + X.norm()));
      CHECK(s.objective <= (M - X).norm() + 1e-12);
    }
  }

  TEST_CASE("affine subspace matches the KKT oracle") {
    Rng rng(49);
    const Matrix B = gaussian(5, 3, rng), C = gaussian(3, 4, rng), M = gaussian(5, 4, rng);
    std::vector<Matrix> basis{gaussian(3, 3, rng), gaussian(3, 3, rng)};
    const Matrix offset = gaussian(3, 3, rng);
    const FrobSolution s = solve(M, B, C, AffineSubspace{basis, offset});
    Matrix K(20, 2);
    for (Index k = 0; k < 2; ++k) K.col(k) = vec(B * basis[static_cast<std::size_t>(k)] * C);
    const Vector theta = oracle::least_squares(K, vec(M - B * offset * C));
    const Matrix X = offset + theta(0) * basis[0] + theta(1) * basis[1];
    CHECK(s.objective == doctest::Approx((M - B * X * C).norm()).epsilon(1e-10));
    CHECK(max_abs(s.X_star - X) <= 1e-9);
  }

  TEST_CASE("product constraint matches the KKT oracle") {
    Rng rng(50);
    const Matrix B = gaussian(5, 4, rng), C = gaussian(4, 5, rng), M = gaussian(5, 5, rng);
    const Matrix F = gaussian(2, 4, rng), G = gaussian(4, 1, rng);
    const Matrix H = F * gaussian(4, 4, rng) * G;
    const FrobSolution s = solve(M, B, C, ProductConstraint{F, G, H});
    const Vector x = oracle::constrained_least_squares(op(B, C), vec(M), op(F, G), vec(H));
    const Matrix X = unvec(x, 4, 4);
    CHECK(s.objective == doctest::Approx((M - B * X * C).norm()).epsilon(1e-10));
    CHECK((F * s.X_star * G - H).norm() <= 1e-10);
  }

  TEST_CASE("inconsistent product constraint is infeasible") {
    const Matrix F = Matrix::Zero(1, 2), G = Matrix::Ones(2, 1), H = Matrix::Ones(1, 1);
    CHECK_THROWS_AS(solve(Matrix::Zero(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                          ProductConstraint{F, G, H}),
                    InfeasibleError);
  }

  TEST_CASE("structures with general multipliers match basis least squares") {
    Rng rng(51);
    const Matrix B = gaussian(5, 3, rng), C = gaussian(3, 4, rng), M = gaussian(5, 4, rng);
    for (Structure k : {Structure::symmetric, Structure::hankel, Structure::toeplitz}) {
      const auto basis = structure_basis(k, 3, 3);
      Matrix K(20, static_cast<Index>(basis.size()));
      for (std::size_t j = 0; j < basis.size(); ++j) K.col(static_cast<Index>(j)) = vec(B * basis[j] * C);
      const Vector theta = oracle::least_squares(K, vec(M));
      Matrix X = Matrix::Zero(3, 3);
      for (std::size_t j = 0; j < basis.size(); ++j) X += theta(static_cast<Index>(j)) * basis[j];
      const FrobSolution s = solve(M, B, C, Structural{k});
      CHECK(s.objective == doctest::Approx((M - B * X * C).norm()).epsilon(1e-10));
    }
    CHECK_THROWS_AS(solve(M, B, C, Structural{Structure::nonnegative}), CapabilityError);
  }

  TEST_CASE("ball with identities is radial projection") {
    const Matrix c = Matrix::Zero(2, 2);
    const Matrix M = (Matrix(2, 2) << 3, 0, 0, 4).finished();
    const Matrix X = project_ball(M, c, 1.0);
    CHECK(max_abs(X - M / 5.0) <= 1e-15);
    CHECK(max_abs(project_ball(M, c, 10.0) - M) == 0.0);
  }

  TEST_CASE("subspace-ball intersection matches a Tikhonov-bisection oracle") {
    Rng rng(52);
    const Matrix B = gaussian(6, 3, rng), C = gaussian(3, 5, rng), M = 5 * gaussian(6, 5, rng);
    const auto basis = structure_basis(Structure::hankel, 3, 3);
    const Matrix N = gaussian(3, 3, rng);
    const Matrix center = project_structure(gaussian(3, 3, rng), Structure::hankel) + 0.1 * N / N.norm();
    const double radius = 0.3;
    const FrobSolution s = lsqi(M, B, C, basis, center, radius);

    Matrix Phi(9, static_cast<Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) Phi.col(static_cast<Index>(j)) = vec(basis[j]);
    const Matrix K = op(B, C) * Phi;
    const Vector theta_c = Phi.transpose() * vec(center);
    const Vector perp = vec(center) - Phi * theta_c;
    const double r_sub = std::sqrt(radius * radius - perp.squaredNorm());
    const Vector rhs = vec(M) - op(B, C) * Phi * theta_c;
    // θ(η) = argmin ‖K θ − rhs‖² + η‖θ‖², with ‖θ(η)‖ = r_sub on the active boundary.
    const auto theta_at = [&](double eta) {
      const Matrix N = K.transpose() * K + eta * Matrix::Identity(K.cols(), K.cols());
      return Vector(N.ldlt().solve(K.transpose() * rhs));
    };
    REQUIRE(theta_at(0).norm() > r_sub);
    double lo = 0.0, hi = 1.0;
    while (theta_at(hi).norm() > r_sub) hi *= 2;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (theta_at(mid).norm() > r_sub ? lo : hi) = mid;
    }
    const Matrix X = unvec(Phi * (theta_c + theta_at(hi)), 3, 3);
    CHECK(s.objective == doctest::Approx((M - B * X * C).norm()).epsilon(1e-9));
    CHECK((s.X_star - center).norm() <= radius + 1e-10);
    CHECK(max_abs(s.X_star - X) <= 1e-7);
  }

  TEST_CASE("ball that misses the subspace is infeasible") {
    const Matrix center = (Matrix(2, 2) << 0, 5, -5, 0).finished();
    CHECK_THROWS_AS(solve(Matrix::Zero(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                          Intersection{{Structural{Structure::symmetric}, FrobeniusBall{center, 1.0}}}),
                    InfeasibleError);
  }

  TEST_CASE("PSD congruence") {
    Rng rng(53);
    const Matrix M = gaussian(4, 4, rng);
    // B = I: eigenvalue clipping of the symmetric part.
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
    const Matrix clip = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                        es.eigenvectors().transpose();
    const FrobSolution s = solve(M, Matrix::Identity(4, 4), Matrix::Identity(4, 4), PsdCone{});
    CHECK(max_abs(s.X_star - clip) <= 1e-12);

    const Matrix B = gaussian(4, 3, rng);
    const FrobSolution g = solve_psd_congruence(M, B);
    Eigen::SelfAdjointEigenSolver<Matrix> gx(g.X_star);
    CHECK(gx.eigenvalues().minCoeff() >= -1e-12);
    for (int t = 0; t < 200; ++t) {
      const Matrix L = gaussian(3, 3, rng);
      const Matrix X = project_psd(g.X_star + 0.05 * (L + L.transpose()));
      CHECK(g.objective <= (M - B * X * B.transpose()).norm() + 1e-12);
    }
    CHECK_THROWS_AS(solve(M, B, gaussian(3, 4, rng), PsdCone{}), CapabilityError);
  }

  TEST_CASE("symmetric and nonnegative intersection equals the closed form") {
    Rng rng(54);
    for (int t = 0; t < 5; ++t) {
      const Matrix M = gaussian(5, 5, rng);
      const Matrix X = project_intersection(M, {Structural{Structure::symmetric}, Structural{Structure::nonnegative}});
      CHECK(max_abs(X - oracle::symmetric_nonnegative(M)) <= 1e-10);
    }
  }

  TEST_CASE("left rank-one affine term matches the stacked least-squares oracle") {
    Rng rng(55);
    const Matrix B = gaussian(4, 3, rng), C = gaussian(3, 5, rng), M = gaussian(4, 5, rng);
    const Matrix D = gaussian(4, 4, rng);
    const Vector e = gaussian_vector(5, rng);
    const FrobSolution s = solve(M, B, C, Unconstrained{}, LeftRankOne{D, e});
    REQUIRE(s.x_star);
    Matrix K(20, 9 + 4);
    K << op(B, C), -kron(Matrix(e), D);
    const Vector z = oracle::least_squares(K, vec(M));
    CHECK(s.objective == doctest::Approx((vec(M) - K * z).norm()).epsilon(1e-10));
  }

  TEST_CASE("right rank-one affine term with a rank constraint beats competitors") {
    Rng rng(56);
    const Matrix B = gaussian(4, 3, rng), C = gaussian(3, 4, rng), M = gaussian(4, 4, rng);
    const Vector d = gaussian_vector(4, rng);
    const Matrix E = gaussian(4, 4, rng);
    const RightRankOne term{d, E};
    const FrobSolution s = solve(M, B, C, RankAtMost{1}, term);
    REQUIRE(s.x_star);
    CHECK(constraint_violation(RankAtMost{1}, s.X_star) <= 1e-10);
    const SvdFactors f = svd(s.X_star);
    const Vector l = f.sigma(0) * f.U.col(0), r = f.V.col(0);
    for (int t = 0; t < 100; ++t) {
      const Matrix X = (l + 1e-2 * gaussian_vector(3, rng)) * (r + 1e-2 * gaussian_vector(3, rng)).transpose();
      const Vector x = *s.x_star + 1e-2 * gaussian_vector(4, rng);
      CHECK(s.objective <= (M - apply_model(B, X, C, term, x)).norm() + 1e-12);
    }
  }

  TEST_CASE("lemma_rank1") {
    Rng rng(57);
    const Matrix A = gaussian(4, 3, rng), B = gaussian(4, 2, rng);
    const Vector c = gaussian_vector(3, rng);
    const Vector x = lemma_rank1(A, B, c);
    const Matrix K = kron(Matrix(c), B);
    CHECK(max_abs(x - oracle::least_squares(K, vec(A))) <= 1e-10);
  }

  TEST_CASE("separable Kronecker reduces to a smaller problem") {
    Rng rng(58);
    const Matrix B = gaussian(2, 2, rng), C = gaussian(2, 2, rng), X0 = gaussian(3, 3, rng);
    const Matrix L = X0 + X0.transpose();
    const FrobSolution s = solve_separable_kron(kron(B, kron(L, C)), B, C, Structural{Structure::symmetric});
    CHECK(max_abs(s.X_star - L) <= 1e-10);
    CHECK(s.objective <= 1e-10);
  }

  TEST_CASE("shape errors") {
    CHECK_THROWS_AS(solve(Matrix::Zero(3, 3), Matrix::Identity(2, 2), Matrix::Identity(2, 2), Unconstrained{}),
                    DomainError);
    CHECK_THROWS_AS(solve(Matrix::Zero(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2), RankAtMost{0}),
                    DomainError);
    CHECK_THROWS_AS(solve(Matrix::Zero(4, 4), 2 * Matrix::Identity(4, 4), Matrix::Identity(4, 4),
                          PrescribedPartialTrace{1.0, 2, {}}),
                    CapabilityError);
  }

  TEST_CASE("lemma_rank1 examples") {
    const Vector x = lemma_rank1(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Vector::Ones(2));
    CHECK(max_abs(x - Vector::Constant(2, 0.5)) <= 1e-15);
    const Matrix A = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();
    CHECK(max_abs(lemma_rank1(A, Matrix::Identity(2, 2), Vector::Unit(3, 0)) - A.col(0)) <= 1e-15);
    CHECK_THROWS_AS(lemma_rank1(A, Matrix::Identity(2, 2), Vector::Zero(3)), DomainError);
  }

  TEST_CASE("affine term examples") {
    // X pinned to 0: only x moves, and it centers each row.
    const Matrix A = (Matrix(2, 2) << 1, 3, 1, 3).finished();
    const Matrix I = Matrix::Identity(2, 2);
    const FrobSolution s = solve_affine(A, I, I, LeftRankOne{I, Vector::Ones(2)}, AffineSubspace{{}, Matrix::Zero(2, 2)});
    REQUIRE(s.x_star);
    CHECK(max_abs(*s.x_star - Vector::Constant(2, -2.0)) <= 1e-14);
    CHECK(s.objective == doctest::Approx(2.0));

    Rng rng(59);
    const Matrix B = gaussian(3, 3, rng), C = gaussian(3, 3, rng), M = gaussian(3, 3, rng);
    const Vector e1 = Vector::Unit(3, 0);
    const FrobSolution t = solve_affine(M, B, C, LeftRankOne{Matrix::Identity(3, 3), e1}, RankAtMost{1});
    const Matrix P = Matrix::Identity(3, 3) - e1 * e1.transpose();
    CHECK(t.objective == doctest::Approx((M * P - B * t.X_star * C * P).norm()).epsilon(1e-10));
  }

  TEST_CASE("affine term beats the two-stage choice") {
    Rng rng(60);
    const Matrix B = gaussian(4, 3, rng), C = gaussian(3, 4, rng), M = gaussian(4, 4, rng);
    const Matrix D = gaussian(4, 4, rng);
    const Vector e = gaussian_vector(4, rng);
    const FrobSolution joint = solve_affine(M, B, C, LeftRankOne{D, e}, Unconstrained{});
    const FrobSolution plain = solve_unconstrained(M, B, C);
    // Best x for the plain X: least squares in x alone.
    const Matrix R = M - B * plain.X_star * C;
    const Vector x = oracle::least_squares(-kron(Matrix(e), D), vec(R));
    const double two_stage = (vec(R) + kron(Matrix(e), D) * x).norm();
    CHECK(joint.objective <= two_stage + 1e-10);
  }

  TEST_CASE("unconstrained examples") {
    const Matrix B = (Matrix(2, 1) << 1, 0).finished();
    const Matrix M = (Matrix(2, 2) << 2, 3, 4, 5).finished();
    const FrobSolution s = solve_unconstrained(M, B, B.transpose());
    CHECK(s.X_star.size() == 1);
    CHECK(s.X_star(0, 0) == doctest::Approx(2.0));
    CHECK(s.objective == doctest::Approx(std::sqrt(50.0)));
    Rng rng(61);
    const Matrix Bf = gaussian(5, 3, rng), Cf = gaussian(3, 4, rng), X = gaussian(3, 3, rng);
    CHECK((solve_unconstrained(Bf * X * Cf, Bf, Cf).X_star - X).norm() <= 1e-10 * X.norm());
  }

  TEST_CASE("rank examples") {
    const Matrix I = Matrix::Identity(3, 3);
    const Matrix M = (Matrix(3, 3) << 3, 0, 0, 0, 2, 0, 0, 0, 1).finished();
    const FrobSolution s = solve_rank(M, I, I, 2);
    CHECK(max_abs(s.X_star - (Matrix(3, 3) << 3, 0, 0, 0, 2, 0, 0, 0, 0).finished()) <= 1e-15);
    CHECK(s.objective == doctest::Approx(1.0));

    const Matrix A = (Matrix(2, 2) << 0, 1, 1, 1).finished();
    const Matrix Bx = (Matrix(2, 2) << -1, 0, 0, 0).finished(), Cx = (Matrix(2, 2) << 1, 0, 0, 0).finished();
    const FrobSolution ex = solve(A, Bx, Cx, RankAtMost{1});
    CHECK(ex.objective == doctest::Approx(std::sqrt(3.0)));
    CHECK(std::abs((A - Bx * ex.X_star * Cx)(0, 0)) <= 1e-15);

    Rng rng(62);
    const Matrix B = gaussian(5, 4, rng), C = gaussian(4, 6, rng), X = gaussian(4, 2, rng) * gaussian(2, 4, rng);
    CHECK(solve_rank(B * X * C, B, C, 2).objective <= 1e-10 * (B * X * C).norm());
  }

  TEST_CASE("rank and Kronecker rank objectives are nonincreasing in r") {
    Rng rng(63);
    const Matrix B = gaussian(6, 4, rng), C = gaussian(4, 6, rng), M = gaussian(6, 6, rng);
    double prev = 1e300;
    for (Index r = 1; r <= 4; ++r) {
      const double o = solve_rank(M, B, C, r).objective;
      CHECK(o <= prev + 1e-12);
      prev = o;
    }
    const Matrix I2 = Matrix::Identity(2, 2);
    prev = 1e300;
    for (Index r = 1; r <= 4; ++r) {
      const double o = solve_kron_rank(gaussian(4, 4, rng) * 0 + M.topLeftCorner(4, 4), I2, I2, I2, I2, r, {2, 2, 2, 2}).objective;
      CHECK(o <= prev + 1e-12);
      prev = o;
    }
  }

  TEST_CASE("Kronecker rank examples") {
    Rng rng(64);
    const Matrix I2 = Matrix::Identity(2, 2), I3 = Matrix::Identity(3, 3);
    const BlockShape xs{2, 3, 2, 3};
    const Matrix Y = gaussian(2, 2, rng), Z = gaussian(3, 3, rng);
    const FrobSolution s = solve_kron_rank(kron(Y, Z), I2, I3, I2, I3, 1, xs);
    CHECK(s.objective <= 1e-12);
    CHECK(max_abs(s.X_star - kron(Y, Z)) <= 1e-12);

    const Matrix M = kron(Y, Z) + kron(gaussian(2, 2, rng), gaussian(3, 3, rng));
    const Vector sv = oracle::singular_values(rearrange2(M, xs));
    CHECK(solve_kron_rank(M, I2, I3, I2, I3, 1, xs).objective ==
          doctest::Approx(sv.tail(sv.size() - 1).norm()).epsilon(1e-10));

    // Planted Kronecker rank 2 with full-rank factors.
    const Matrix B1 = gaussian(3, 2, rng), B2 = gaussian(3, 2, rng), C1 = gaussian(2, 3, rng), C2 = gaussian(2, 2, rng);
    const BlockShape ps{2, 2, 2, 2};
    const Matrix X = kron(gaussian(2, 2, rng), gaussian(2, 2, rng)) + kron(gaussian(2, 2, rng), gaussian(2, 2, rng));
    const Matrix A = kron(B1, B2) * X * kron(C1, C2);
    const FrobSolution r = solve_kron_rank(A, B1, B2, C1, C2, 2, ps);
    CHECK((r.X_star - X).norm() <= 1e-8 * X.norm());
  }

  TEST_CASE("vecb objective identity") {
    Rng rng(65);
    for (int t = 0; t < 5; ++t) {
      const Matrix B1 = gaussian(2, 3, rng), B2 = gaussian(3, 2, rng), C1 = gaussian(2, 2, rng),
                   C2 = gaussian(3, 2, rng);
      const Matrix X = gaussian(3 * 2, 2 * 3, rng);
      const Matrix A = gaussian(2 * 3, 2 * 2, rng);
      const double lhs = (A - kron(B1, B2) * X * kron(C1, C2)).norm();
      const double rhs = (rearrange2(A, {2, 3, 2, 2}) -
                          kron(C2.transpose(), B2) * rearrange2(X, {3, 2, 2, 3}) * kron(C1, B1.transpose()))
                             .norm();
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + lhs));
    }
  }

  TEST_CASE("prescribed eigenvalue examples") {
    const Matrix I = Matrix::Identity(2, 2);
    const FrobSolution a = solve_prescribed_eigenvalue(I, I, I, 1.0);
    CHECK(max_abs(a.X_star - I) <= 1e-15);
    CHECK(a.objective <= 1e-15);
    CHECK(solve_prescribed_eigenvalue(I, I, I, 3.0).objective == doctest::Approx(2.0));

    Rng rng(66);
    const Matrix B = gaussian(4, 4, rng), C = gaussian(4, 4, rng);
    Matrix X = gaussian(4, 4, rng);
    const Vector v = gaussian_vector(4, rng);
    X -= (X * v - 1.5 * v) * v.transpose() / v.squaredNorm();  // X v = 1.5 v
    const FrobSolution s = solve_prescribed_eigenvalue(B * X * C, B, C, 1.5);
    CHECK(s.objective <= 1e-8 * (B * X * C).norm());
    CHECK(constraint_violation(PrescribedEigenvalue{1.5}, s.X_star) <= 1e-8 * (1 + s.X_star.norm()));
  }

  TEST_CASE("partial trace examples") {
    const Matrix I = Matrix::Identity(2, 2);
    const FrobSolution z = solve_partial_trace(Matrix::Zero(4, 4), I, I, I, I, 0.0);
    CHECK(max_abs(z.X_star) == 0.0);
    REQUIRE(z.witness);
    CHECK(z.witness->norm() == doctest::Approx(1.0));

    // Planted eigenvector of R(X0) that is a symmetric matrix, which K fixes.
    Rng rng(67);
    const Matrix S = gaussian(2, 2, rng);
    const Vector v = vec(S + S.transpose());
    Matrix N = gaussian(4, 4, rng);
    N -= N * v * v.transpose() / v.squaredNorm();
    const Matrix X0 = rearrange2_inv(0.8 * v * v.transpose() / v.squaredNorm() + N, {2, 2, 2, 2});
    const FrobSolution s = solve_partial_trace(X0, I, I, I, I, 0.8);
    CHECK(s.objective <= 1e-10);
  }

  TEST_CASE("partial trace with Kronecker multipliers") {
    Rng rng(68);
    const Matrix B1 = gaussian(3, 2, rng), B2 = gaussian(2, 2, rng), C1 = gaussian(2, 2, rng),
                 C2 = gaussian(2, 3, rng);
    const Matrix M = gaussian(6, 6, rng);
    const FrobSolution s = solve_partial_trace(M, B1, B2, C1, C2, 0.4);
    REQUIRE(s.witness);
    const Matrix& W = *s.witness;
    CHECK(max_abs(partial_trace(s.X_star * kron(W, Matrix::Identity(2, 2)), 2) - 0.4 * W) <=
          1e-8 * (1 + s.X_star.norm()));
    // Perturbations along the feasible Y ⊗ W family do not improve.
    for (int t = 0; t < 50; ++t) {
      const Matrix V = gaussian(2, 2, rng);
      Matrix Y = gaussian(2, 2, rng);
      Y += (0.4 - (Y * V).trace()) / V.squaredNorm() * V.transpose();
      CHECK(s.objective <= (M - kron(B1, B2) * kron(Y, V) * kron(C1, C2)).norm() + 1e-12);
    }
  }

  TEST_CASE("separable Kronecker examples") {
    Rng rng(69);
    const Matrix B = gaussian(2, 2, rng), C = gaussian(2, 2, rng), X0 = gaussian(2, 2, rng);
    const FrobSolution s = solve_separable_kron(kron(B, kron(X0, C)), B, C, Unconstrained{});
    CHECK(max_abs(s.X_star - X0) <= 1e-12);

    const Matrix M = gaussian(8, 8, rng);
    // Vectorized oracle: the map X ↦ B ⊗ X ⊗ C as an explicit 64×4 matrix.
    Matrix K(64, 4);
    for (Index k = 0; k < 4; ++k) {
      Matrix E = Matrix::Zero(2, 2);
      E.data()[k] = 1.0;
      K.col(k) = vec(kron(B, kron(E, C)));
    }
    const Matrix H = unvec(oracle::least_squares(K, vec(M)), 2, 2);
    CHECK(max_abs(solve_separable_kron(M, B, C, Unconstrained{}).X_star - H) <= 1e-10);
    CHECK(max_abs(solve_separable_kron(M, B, C, Structural{Structure::nonnegative}).X_star - H.cwiseMax(0.0)) <=
          1e-10);
  }

  TEST_CASE("affine subspace examples") {
    Rng rng(70);
    const Matrix I = Matrix::Identity(3, 3), M = gaussian(3, 3, rng), H = gaussian(3, 3, rng);
    CHECK(max_abs(solve_affine_subspace(M, I, I, ProductConstraint{I, I, H}).X_star - H) <= 1e-12);
    const FrobSolution s = solve(M, I, I, Structural{Structure::hankel});
    CHECK(max_abs(s.X_star - project_structure(M, Structure::hankel)) <= 1e-14);
    std::vector<Matrix> basis = structure_basis(Structure::hankel, 3, 3);
    const FrobSolution a = solve_affine_subspace(M, I, I, AffineSubspace{basis, Matrix::Zero(3, 3)});
    CHECK(max_abs(a.X_star - project_structure(M, Structure::hankel)) <= 1e-12);
  }

  TEST_CASE("PSD congruence examples") {
    const Matrix M = (Matrix(2, 2) << 2, 0, 0, -3).finished();
    const Matrix want = (Matrix(2, 2) << 2, 0, 0, 0).finished();
    const FrobSolution a = solve_psd_congruence(M, Matrix::Identity(2, 2));
    CHECK(max_abs(a.X_star - want) <= 1e-14);
    CHECK(a.objective == doctest::Approx(3.0));
    const FrobSolution b = solve_psd_congruence(M, (Matrix(2, 2) << 1, 0, 0, 2).finished());
    CHECK(max_abs(b.X_star - want) <= 1e-14);
    CHECK(b.objective == doctest::Approx(3.0));
    const FrobSolution c = solve_psd_congruence((Matrix(2, 2) << 0, 1, -1, 0).finished(), Matrix::Identity(2, 2));
    CHECK(max_abs(c.X_star) <= 1e-15);
    CHECK(c.objective == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("ball projection is the nearest point on the segment") {
    Rng rng(71);
    const Matrix M = 3 * gaussian(3, 3, rng), center = gaussian(3, 3, rng);
    const Matrix P = project_ball(M, center, 0.5);
    const auto along = [&](double t) { return (M - (center + t * (M - center))).norm(); };
    const double t = oracle::golden_section(
        [&](double s) { return (center + s * (M - center) - center).norm() <= 0.5 ? along(s) : 1e300; }, 0.0, 1.0,
        1e-14);
    CHECK(max_abs(P - (center + t * (M - center))) <= 1e-10);
    const Matrix In = center + 0.1 * (M - center) / (M - center).norm();
    CHECK(max_abs(project_ball(In, center, 0.5) - In) == 0.0);
    CHECK(max_abs(project_ball(2 * Matrix::Identity(2, 2) / std::sqrt(2.0), Matrix::Zero(2, 2), 1.0) -
                  Matrix::Identity(2, 2) / std::sqrt(2.0)) <= 1e-15);
  }

  TEST_CASE("lsqi limits") {
    Rng rng(72);
    const Matrix B = Matrix::Identity(4, 4), C = gaussian(4, 3, rng), M = gaussian(4, 3, rng);
    const auto basis = structure_basis(Structure::hankel, 4, 4);
    const Matrix center = project_structure(gaussian(4, 4, rng), Structure::hankel);
    const FrobSolution inf = lsqi(M, B, C, basis, center, std::numeric_limits<double>::infinity());
    const FrobSolution free = solve(M, B, C, Structural{Structure::hankel});
    CHECK(max_abs(inf.X_star - free.X_star) <= 1e-10);
    CHECK(max_abs(lsqi(M, B, C, basis, center, 0.0).X_star - center) <= 1e-14);
  }

  TEST_CASE("intersection examples") {
    Rng rng(73);
    const Matrix M = gaussian(4, 4, rng);
    CHECK(max_abs(project_intersection(M, {Structural{Structure::symmetric}}) -
                  project_structure(M, Structure::symmetric)) <= 1e-15);
    const Matrix Xh = project_structure(gaussian(4, 4, rng), Structure::hankel);
    const Matrix Mh = project_structure(3 * gaussian(4, 4, rng), Structure::hankel);
    const double delta = 0.5;
    const Matrix want = Xh + std::min(1.0, delta / (Mh - Xh).norm()) * (Mh - Xh);
    const Matrix got = solve(Mh, Matrix::Identity(4, 4), Matrix::Identity(4, 4),
                             Intersection{{Structural{Structure::hankel}, FrobeniusBall{Xh, delta}}})
                           .X_star;
    CHECK(max_abs(got - want) <= 1e-10);
    CHECK(max_abs(project_intersection(Mh, {Structural{Structure::hankel}, FrobeniusBall{Xh, delta}}) - want) <=
          1e-9);
  }

  TEST_CASE("Hankel-ball with a right multiplier routes to lsqi") {
    Rng rng(74);
    const Matrix Xh = project_structure(gaussian(5, 5, rng), Structure::hankel);
    const Matrix C = gaussian(5, 4, rng);
    const Intersection S{{Structural{Structure::hankel}, FrobeniusBall{Xh, 0.5}}};
    const FrobSolution s = solve(gaussian(5, 4, rng), Matrix::Identity(5, 5), C, S);
    CHECK(constraint_violation(S, s.X_star) <= 1e-10);
  }

  TEST_CASE("convex projections are firmly nonexpansive") {
    Rng rng(75);
    const Matrix c = gaussian(4, 4, rng);
    const std::vector<std::function<Matrix(const Matrix&)>> projections{
        [&](const Matrix& X) { return project_ball(X, c, 0.7); },
        [](const Matrix& X) { return project_psd(X); },
        [](const Matrix& X) {
          return project_intersection(X, {Structural{Structure::symmetric}, Structural{Structure::nonnegative}});
        }};
    for (const auto& P : projections)
      for (int t = 0; t < 20; ++t) {
        const Matrix X = 2 * gaussian(4, 4, rng), Y = 2 * gaussian(4, 4, rng);
        const Matrix d = P(X) - P(Y);
        CHECK(d.squaredNorm() <= (d.transpose() * (X - Y)).trace() + 1e-10);
      }
  }

  TEST_CASE("reported objective equals the recomputed residual") {
    Rng rng(76);
    const Matrix B = gaussian(4, 3, rng), C = gaussian(3, 4, rng), M = gaussian(4, 4, rng);
    for (ConstraintSpec c : {ConstraintSpec{Unconstrained{}}, ConstraintSpec{RankAtMost{1}},
                             ConstraintSpec{PrescribedEigenvalue{0.5}}, ConstraintSpec{Structural{Structure::toeplitz}}}) {
      const FrobSolution s = solve(M, B, C, c);
      CHECK(s.objective == doctest::Approx((M - B * s.X_star * C).norm()).epsilon(1e-10));
    }
  }
}
