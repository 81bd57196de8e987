#include "nearkit/dykstra.hpp"

#include "nearkit/errors.hpp"
#include "nearkit/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace nearkit {

namespace {

std::string dims(const Matrix& M) { return std::to_string(M.rows()) + "x" + std::to_string(M.cols()); }

bool contains_psd(const ConstraintSpec& c) {
  if (c.is<PsdCone>()) return true;
  if (c.is<Intersection>()) {
    const auto& m = c.as<Intersection>().members;
    return std::any_of(m.begin(), m.end(), contains_psd);
  }
  return false;
}

bool identity(const Matrix& B) {
  return B.rows() == B.cols() && B.isApprox(Matrix::Identity(B.rows(), B.cols()), 0.0);
}

void require_finite_step(const Matrix& M, const char* step, long k) {
  if (!M.allFinite())
    throw NumericError(std::string(step) + " produced a non-finite iterate at iteration " + std::to_string(k));
}

}  // namespace

void NearnessProblem::validate() const {
  for (const auto& [M, name] : {std::pair<const Matrix&, const char*>{A, "A"}, {B, "B"}, {C, "C"}})
    if (!M.allFinite()) throw DomainError(std::string(name) + " contains NaN or Inf");
  if (B.rows() != A.rows() || C.cols() != A.cols())
    throw DomainError("A is " + dims(A) + " but B is " + dims(B) + " and C is " + dims(C));
  if (B.cols() < 1 || C.rows() < 1) throw DomainError("X must have at least one row and column");
}

double objective_of(const NearnessProblem& problem, const Matrix& X, const std::optional<Vector>& x) {
  return schatten_norm(problem.A - apply_model(problem.B, X, problem.C, problem.term, x), problem.p);
}

DykstraSolver::DykstraSolver(NearnessProblem problem, SolverOptions options)
    : problem_((problem.validate(), std::move(problem))),
      options_(options),
      x_step_(problem_.B, problem_.C, problem_.constraint, problem_.term) {
  if (!(options_.mu > 0.0) || !std::isfinite(options_.mu)) throw DomainError("mu must be positive");
  if (!(options_.tol > 0.0)) throw DomainError("tol must be positive");
  if (options_.max_iter < 1) throw DomainError("max_iter must be >= 1");
}

SolverState DykstraSolver::initial_state() const {
  const Matrix& A = problem_.A;
  SolverState s;
  s.X = Matrix::Zero(problem_.x_rows(), problem_.x_cols());
  s.residual = A;
  switch (options_.init) {
    case Init::standard:
      s.Y = A;
      s.Delta = Matrix::Zero(A.rows(), A.cols());
      break;
    case Init::zeros:
      s.Y = Matrix::Zero(A.rows(), A.cols());
      s.Delta = Matrix::Zero(A.rows(), A.cols());
      break;
    case Init::random: {
      Rng rng(options_.seed);
      const double scale = (1.0 + A.norm()) / std::sqrt(static_cast<double>(A.size()));
      s.Y = scale * gaussian(A.rows(), A.cols(), rng);
      s.Delta = scale * gaussian(A.rows(), A.cols(), rng);
      break;
    }
  }
  return s;
}

SolverState DykstraSolver::step(const SolverState& s) const {
  const Matrix& A = problem_.A;
  SolverState n;
  n.k = s.k + 1;
  // X-step: Frobenius nearness on the shifted data A + Δ_k − Y_k.
  const FrobSolution xs = x_step_.solve(A + s.Delta - s.Y);
  n.X = xs.X_star;
  n.x = xs.x_star;
  require_finite_step(n.X, "X-step", n.k);
  n.residual = A - apply_model(problem_.B, n.X, problem_.C, problem_.term, n.x);
  // Y-step: prox of the penalty at A + Δ_k − B X_{k+1} C.
  const Matrix M = n.residual + s.Delta;
  n.Y = prox(M, options_.mu, problem_.p);
  require_finite_step(n.Y, "Y-step", n.k);
  // Δ-step: Δ_{k+1} = Δ_k − Y_{k+1} + A − B X_{k+1} C.
  n.Delta = M - n.Y;
  n.last_objective = std::numeric_limits<double>::quiet_NaN();
  return n;
}

SolveReport DykstraSolver::run(SolverState s, const TraceCallback& on_row) const {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const double thresh = options_.tol * (1.0 + problem_.A.norm());
  const bool tracing = options_.record_trace || static_cast<bool>(on_row);

  SolveReport r;
  double consistency = std::numeric_limits<double>::infinity();
  for (long it = 0; it < options_.max_iter; ++it) {
    SolverState n = step(s);
    const double dY = (n.Y - s.Y).norm();
    const double dD = (n.Delta - s.Delta).norm();
    consistency = (n.Y - n.residual).norm();
    if (tracing) {
      n.last_objective = schatten_norm(n.residual, problem_.p);
      TraceRow row;
      row.k = n.k;
      row.objective = n.last_objective;
      row.step_norm = std::sqrt(dY * dY + dD * dD);
      row.constraint_residual = consistency;
      row.elapsed_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      if (options_.record_trace) r.trace.push_back(row);
      if (on_row) on_row(row);
    }
    s = std::move(n);
    if (std::max({dY, dD, consistency}) <= thresh) {
      r.converged = true;
      break;
    }
  }
  r.X_star = s.X;
  r.x_star = s.x;
  r.Y_star = s.Y;
  r.Delta_star = s.Delta;
  r.iterations = s.k;
  r.constraint_residual = std::isfinite(consistency) ? consistency : 0.0;
  r.objective = schatten_norm(s.residual, problem_.p);
  r.attainment_guaranteed = !(contains_psd(problem_.constraint) && !identity(problem_.B));
  return r;
}

SolverState step(const NearnessProblem& problem, const SolverState& state, const SolverOptions& options) {
  return DykstraSolver(problem, options).step(state);
}

SolveReport solve(const NearnessProblem& problem, const SolverOptions& options, const TraceCallback& on_row) {
  return DykstraSolver(problem, options).solve(on_row);
}

double fejer_gap(const SolverState& current, const SolverState& next, const Matrix& Y_ref, const Matrix& Delta_ref) {
  const double before = (current.Y - Y_ref).squaredNorm() + (current.Delta - Delta_ref).squaredNorm();
  const double after = (next.Y - Y_ref).squaredNorm() + (next.Delta - Delta_ref).squaredNorm();
  return before - after;
}

}  // namespace nearkit
