#include "nearkit/experiments.hpp"

#include "nearkit/errors.hpp"
#include "nearkit/io.hpp"
#include "nearkit/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <ostream>

namespace nearkit::cli {

namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

void require_full_rank(const Matrix& M, const char* what) {
  if (svd(M).numerical_rank != std::min(M.rows(), M.cols()))
    throw NumericError(std::string("generator: ") + what + " is rank deficient");
}

void require_planted(const ConstraintSpec& c, const Matrix& X, double scale, const char* what) {
  const double v = constraint_violation(c, X);
  if (!(v <= 1e-10 * (1.0 + scale)))
    throw NumericError(std::string("generator: planted ") + what + " does not verify (violation " +
                       format_double(v) + ")");
}

Matrix haar_orthogonal(Index n, Rng& rng) {
  const Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

SolverOptions effective(const RunSettings& s, const Matrix& A) {
  SolverOptions o = s.options;
  if (s.mu_scale) o.mu = *s.mu_scale / (1.0 + A.norm());
  o.record_trace = false;
  return o;
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_shortest(*v) : std::string(); }

}  // namespace

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.n << ',' << r.p << ',' << r.constraint << ',' << r.iters << ','
        << format_shortest(r.objective) << ',' << csv_optional(r.forward_error) << ','
        << csv_optional(r.feasibility_violation) << ',' << format_shortest(r.wall_ms) << ',' << r.seed << '\n';
  }
}

int trial_threads(std::size_t tasks) {
  long t = 1;
  if (const char* env = std::getenv("NEARKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) t = v;
  }
  return static_cast<int>(std::clamp<long>(t, 1, std::max<long>(1, static_cast<long>(tasks))));
}

// ---- matrix recovery -------------------------------------------------------

RecoveryCase parse_recovery_case(const std::string& name) {
  if (name == "unconstrained" || name == "i") return RecoveryCase::unconstrained;
  if (name == "product" || name == "ii") return RecoveryCase::product;
  if (name == "eigenvalue" || name == "iii") return RecoveryCase::eigenvalue;
  if (name == "rank" || name == "iv") return RecoveryCase::rank;
  throw DomainError("unknown recovery case '" + name + "'");
}

std::string to_string(RecoveryCase c) {
  switch (c) {
    case RecoveryCase::unconstrained: return "unconstrained";
    case RecoveryCase::product: return "product";
    case RecoveryCase::eigenvalue: return "eigenvalue";
    case RecoveryCase::rank: return "rank";
  }
  return "?";
}

RecoveryInstance make_recovery_instance(RecoveryCase c, Index n, SchattenP p, std::uint64_t seed) {
  if (n < 2) throw DomainError("recovery instances need n >= 2");
  Rng rng(seed);
  RecoveryInstance inst;
  NearnessProblem& P = inst.problem;
  P.p = p;
  P.B = gaussian(n, n, rng);
  P.C = gaussian(n, n, rng);
  require_full_rank(P.B, "B");
  require_full_rank(P.C, "C");
  const Index k = std::max<Index>(1, n / 4);

  switch (c) {
    case RecoveryCase::unconstrained:
      inst.X_true = gaussian(n, n, rng);
      break;
    case RecoveryCase::product: {
      inst.X_true = gaussian(n, n, rng);
      const Matrix F = gaussian(k, n, rng);
      const Matrix G = gaussian(n, k, rng);
      const Matrix H = F * inst.X_true * G;
      P.constraint = ProductConstraint{F, G, H};
      require_planted(P.constraint, inst.X_true, H.norm(), "product constraint");
      break;
    }
    case RecoveryCase::eigenvalue: {
      Matrix T = Matrix::Zero(n, n);
      T(0, 0) = 1.0;
      T.row(0).tail(n - 1) = gaussian(1, n - 1, rng);
      T.bottomRightCorner(n - 1, n - 1) = gaussian(n - 1, n - 1, rng);
      const Matrix Q = haar_orthogonal(n, rng);
      inst.X_true = Q * T * Q.transpose();
      P.constraint = PrescribedEigenvalue{1.0};
      require_planted(P.constraint, inst.X_true, inst.X_true.norm(), "eigenvalue");
      break;
    }
    case RecoveryCase::rank:
      inst.X_true = gaussian(n, k, rng) * gaussian(k, n, rng);
      P.constraint = RankAtMost{k};
      require_planted(P.constraint, inst.X_true, inst.X_true.norm(), "rank");
      break;
  }
  P.A = P.B * inst.X_true * P.C;
  P.validate();
  return inst;
}

TrialResult run_recovery_trial(RecoveryCase c, Index n, SchattenP p, std::uint64_t seed,
                               const RunSettings& settings) {
  const RecoveryInstance inst = make_recovery_instance(c, n, p, seed);
  const SolverOptions o = effective(settings, inst.problem.A);
  const auto t0 = clock::now();
  TrialResult out;
  out.report = solve(inst.problem, o);
  const double ms = ms_since(t0);

  ResultRow& r = out.row;
  r.experiment = "recover";
  r.n = n;
  r.p = p.label();
  r.constraint = to_string(c);
  r.iters = out.report.iterations;
  r.objective = out.report.objective;
  r.forward_error = (out.report.X_star - inst.X_true).norm() / inst.X_true.norm();
  r.feasibility_violation = constraint_violation(inst.problem.constraint, out.report.X_star);
  r.wall_ms = settings.timing ? ms : 0.0;
  r.seed = seed;
  return out;
}

// ---- system identification -------------------------------------------------

double antidiagonal_spread(const Matrix& X) {
  double worst = 0.0;
  for (Index s = 0; s < X.rows() + X.cols() - 1; ++s) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Index i = std::max<Index>(0, s - X.cols() + 1); i <= std::min<Index>(s, X.rows() - 1); ++i) {
      lo = std::min(lo, X(i, s - i));
      hi = std::max(hi, X(i, s - i));
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

SysidInstance make_sysid_instance(Index n, double delta, double ratio, std::uint64_t seed) {
  if (n < 1) throw DomainError("sysid needs n >= 1");
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  if (!(ratio > 0.0)) throw DomainError("column ratio must be positive");
  const Index cols = std::max<Index>(1, static_cast<Index>(std::ceil(ratio * static_cast<double>(n) - 1e-9)));
  Rng rng(seed);
  SysidInstance s;
  s.delta = delta;
  s.C = gaussian(n + 1, cols, rng);
  require_full_rank(s.C, "C");
  const Vector h = gaussian_vector(2 * n + 1, rng);
  s.X_hat.resize(n + 1, n + 1);
  for (Index j = 0; j <= n; ++j)
    for (Index i = 0; i <= n; ++i) s.X_hat(i, j) = h(i + j);
  if (antidiagonal_spread(s.X_hat) != 0.0) throw NumericError("generator: X_hat is not Hankel");

  NearnessProblem& P = s.problem;
  P.A = Matrix::Zero(n + 1, cols);
  P.B = Matrix::Identity(n + 1, n + 1);
  P.C = s.C;
  P.constraint = Intersection{{Structural{Structure::hankel}, FrobeniusBall{s.X_hat, delta}}};
  P.p = SchattenP::one();
  P.validate();
  return s;
}

SysidResult run_sysid(const SysidInstance& inst, Index n, std::uint64_t seed, const RunSettings& settings) {
  const SolverOptions o = effective(settings, inst.problem.A);
  const auto t0 = clock::now();
  SysidResult out;
  out.report = solve(inst.problem, o);
  const double ms = ms_since(t0);
  out.hankel_spread = antidiagonal_spread(out.report.X_star);

  ResultRow& r = out.row;
  r.experiment = "sysid";
  r.n = n;
  r.p = "1";
  r.constraint = "hankel_ball";
  r.iters = out.report.iterations;
  r.objective = out.report.objective;
  r.feasibility_violation = std::max(0.0, (inst.X_hat - out.report.X_star).norm() - inst.delta);
  r.wall_ms = settings.timing ? ms : 0.0;
  r.seed = seed;
  return out;
}

// ---- CFAR --------------------------------------------------------------------

CfarInstance make_cfar_instance(Index n, Index p_prime, std::uint64_t seed, bool identity_b) {
  if (n < 1 || p_prime < 1 || p_prime > n) throw DomainError("cfar needs 1 <= p' <= n");
  if (identity_b && p_prime != n) throw DomainError("cfar: B = I needs p' = n");
  Rng rng(seed);
  CfarInstance c;
  const Matrix G = gaussian(n, n, rng);
  const Matrix GG = G * G.transpose();
  c.A = 0.5 * (GG + GG.transpose());
  c.B = identity_b ? Matrix::Identity(n, n) : gaussian(n, p_prime, rng);
  require_full_rank(c.B, "B");
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(c.A, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-12 * std::max(1.0, eig.eigenvalues()(n - 1)))
    throw NumericError("generator: A is not positive semidefinite");

  NearnessProblem& P = c.problem;
  P.A = c.A;
  P.B = c.B;
  P.C = c.B.transpose();
  P.constraint = PsdCone{};
  P.p = SchattenP::infinity();
  P.validate();
  return c;
}

CfarResult run_cfar(const CfarInstance& inst, std::uint64_t seed, const RunSettings& settings) {
  const SolverOptions o = effective(settings, inst.problem.A);
  const auto t0 = clock::now();
  CfarResult out;
  out.report = solve(inst.problem, o);
  const double ms = ms_since(t0);
  const Matrix S = 0.5 * (out.report.X_star + out.report.X_star.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  out.lambda_min = eig.eigenvalues()(0);
  out.lambda_max = eig.eigenvalues()(S.rows() - 1);

  ResultRow& r = out.row;
  r.experiment = "cfar";
  r.n = inst.A.rows();
  r.p = "inf";
  r.constraint = "psd_p" + std::to_string(inst.B.cols());
  r.iters = out.report.iterations;
  r.objective = out.report.objective;
  r.feasibility_violation = std::max(0.0, -out.lambda_min);
  r.wall_ms = settings.timing ? ms : 0.0;
  r.seed = seed;
  return out;
}

// ---- the 2×2 example ---------------------------------------------------------

NearnessProblem mirsky_problem(SchattenP p) {
  NearnessProblem P;
  P.A = (Matrix(2, 2) << 0, 1, 1, 1).finished();
  P.B = (Matrix(2, 2) << -1, 0, 0, 0).finished();
  P.C = (Matrix(2, 2) << 1, 0, 0, 0).finished();
  P.constraint = RankAtMost{1};
  P.p = p;
  return P;
}

MirskyResult run_mirsky(double mu, bool tamper) {
  struct Case {
    SchattenP p;
    double value, r00;
    Matrix S;
  };
  const double r3 = 1.0 / std::sqrt(3.0), a = 1.0 / (2.0 * std::sqrt(2.0));
  const std::vector<Case> cases = {
      {SchattenP::one(), 2.0, 1.0, (Matrix(2, 2) << 0, 1, 1, 0).finished()},
      {SchattenP::finite(2.0), std::sqrt(3.0), 0.0, (Matrix(2, 2) << 0, r3, r3, r3).finished()},
      {SchattenP::infinity(), std::sqrt(2.0), -1.0, (Matrix(2, 2) << 0, a, a, 2 * a).finished()},
  };

  MirskyResult out;
  out.pass = true;
  for (const auto& c : cases) {
    MirskyRow row;
    row.p = c.p;
    row.expected = c.value;
    row.expected_residual_00 = c.r00;

    Matrix S = c.S;
    if (tamper) S(0, 1) = -S(0, 1);
    const Matrix R_expected = (Matrix(2, 2) << c.r00, 1, 1, 1).finished();
    row.closed_form_certificate_ok = check_subgradient(R_expected, make_certificate(S), c.p).ok;

    const NearnessProblem P = mirsky_problem(c.p);
    SolverOptions o;
    o.mu = mu;
    const SolveReport rep = solve(P, o);
    row.objective = rep.objective;
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    row.residual_00 = (P.A - P.B * rep.X_star * P.C)(0, 0);
    row.solver_certificate_ok = certify(P, rep, mu).ok;

    row.pass = row.converged && std::abs(row.objective - row.expected) <= 1e-6 &&
               std::abs(row.residual_00 - row.expected_residual_00) <= 1e-4 && row.closed_form_certificate_ok &&
               row.solver_certificate_ok;
    out.pass = out.pass && row.pass;
    out.rows.push_back(row);
  }
  return out;
}

void print_mirsky(std::ostream& out, const MirskyResult& r) {
  out << "p     objective           expected            r11        expected  ref-cert    solver-cert  iters  "
         "result\n";
  for (const auto& row : r.rows) {
    out << std::left << std::setw(6) << row.p.label() << std::setw(20) << format_shortest(row.objective)
        << std::setw(20) << format_shortest(row.expected) << std::setw(11) << std::setprecision(6)
        << row.residual_00 << std::setw(10) << row.expected_residual_00 << std::setw(12)
        << (row.closed_form_certificate_ok ? "ok" : "BAD") << std::setw(13) << (row.solver_certificate_ok ? "ok" : "BAD")
        << std::setw(7) << row.iterations << (row.pass ? "PASS" : "FAIL") << '\n';
  }
  out << (r.pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace nearkit::cli
