#pragma once

// Dykstra-corrected alternating minimization for min over X in S of
// ‖A − B X C‖ in a Schatten norm. Each iteration solves one Frobenius
// nearness problem (X-step), one Schatten prox (Y-step) and updates the
// correction Δ.

#include "nearkit/constraint.hpp"
#include "nearkit/frobsolve.hpp"
#include "nearkit/schatten.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace nearkit {

struct NearnessProblem {
  Matrix A, B, C;
  ConstraintSpec constraint;
  AffineTerm term;
  SchattenP p = SchattenP::one();

  /// Throws DomainError on non-conformable shapes or non-finite data.
  void validate() const;
  Index x_rows() const { return B.cols(); }
  Index x_cols() const { return C.rows(); }
};

enum class Init {
  standard,  // X0 = 0, Y0 = A, Δ0 = 0
  zeros,     // Y0 = 0, Δ0 = 0
  random,    // Y0, Δ0 seeded Gaussian scaled to ‖A‖
};

struct SolverOptions {
  double mu = 1.0;
  double tol = 1e-10;
  long max_iter = 100000;
  bool record_trace = false;
  std::uint64_t seed = 0;
  Init init = Init::standard;
};

struct SolverState {
  Matrix X, Y, Delta;
  std::optional<Vector> x;  // affine-term coefficient
  Matrix residual;          // A − B X C (+ affine term)
  long k = 0;
  double last_objective = 0.0;  // only maintained while tracing
};

struct TraceRow {
  long k = 0;
  double objective = 0.0;
  double step_norm = 0.0;            // sqrt(‖ΔY‖² + ‖ΔΔ‖²)
  double constraint_residual = 0.0;  // ‖Y − (A − B X C)‖
  double elapsed_ms = 0.0;
};

using TraceCallback = std::function<void(const TraceRow&)>;

struct SolveReport {
  Matrix X_star, Y_star, Delta_star;
  std::optional<Vector> x_star;
  double objective = 0.0;
  long iterations = 0;
  bool converged = false;
  /// False for PSD constraints with a general B, where a minimizer need not
  /// be attained.
  bool attainment_guaranteed = true;
  double constraint_residual = 0.0;
  std::vector<TraceRow> trace;
};

/// Holds the factorized X-step so repeated iterations reuse it.
class DykstraSolver {
 public:
  DykstraSolver(NearnessProblem problem, SolverOptions options);

  SolverState initial_state() const;
  SolverState step(const SolverState& s) const;
  SolveReport run(SolverState s, const TraceCallback& on_row = {}) const;
  SolveReport solve(const TraceCallback& on_row = {}) const { return run(initial_state(), on_row); }

  const NearnessProblem& problem() const { return problem_; }
  const SolverOptions& options() const { return options_; }

 private:
  NearnessProblem problem_;
  SolverOptions options_;
  FrobSolver x_step_;
};

SolverState step(const NearnessProblem& problem, const SolverState& state, const SolverOptions& options);
SolveReport solve(const NearnessProblem& problem, const SolverOptions& options = {},
                  const TraceCallback& on_row = {});

/// schatten_norm(A − B X C (+ affine term), p).
double objective_of(const NearnessProblem& problem, const Matrix& X, const std::optional<Vector>& x = {});

/// (‖Y_k − Y_ref‖² + ‖Δ_k − Δ_ref‖²) − (‖Y_{k+1} − Y_ref‖² + ‖Δ_{k+1} − Δ_ref‖²).
double fejer_gap(const SolverState& current, const SolverState& next, const Matrix& Y_ref,
                 const Matrix& Delta_ref);

struct CertifyResult {
  DualCertificate certificate;  // G = μΔ (rescaled to a norm subgradient for finite p)
  bool subgradient_ok = false;
  bool sampled = false;  // false when S has no sampler: subgradient check only
  double worst_violation = 0.0;  // min over samples of the normalized tr(Gᵀ B(X* − X)C)
  double value = 0.0;            // tr(Gᵀ Y*)
  bool ok = false;
};

CertifyResult certify(const NearnessProblem& problem, const SolveReport& report, double mu,
                      std::uint64_t seed = 0, int samples = 1000);

}  // namespace nearkit
