#pragma once

// Seeded generators and runners for the desk-scale experiments: matrix
// recovery, Hankel system identification, PSD-constrained CFAR and the 2×2
// rank-one example whose minimizer depends on p.

#include "nearkit/dykstra.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nearkit::cli {

inline constexpr const char* kResultsHeader =
    "experiment,n,p,constraint,iters,objective,forward_error,feasibility_violation,wall_ms,seed";

struct ResultRow {
  std::string experiment;
  Index n = 0;
  std::string p;
  std::string constraint;
  long iters = 0;
  double objective = 0.0;
  std::optional<double> forward_error;
  std::optional<double> feasibility_violation;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

void write_results(std::ostream& out, const std::vector<ResultRow>& rows);

/// Worker count from NEARKIT_THREADS (default 1, clamped to [1, tasks]).
int trial_threads(std::size_t tasks);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results keep
/// index order.
template <class T>
std::vector<T> run_indexed(std::size_t count, int threads, const std::function<T(std::size_t)>& fn);

// ---- matrix recovery -------------------------------------------------------

enum class RecoveryCase { unconstrained, product, eigenvalue, rank };

RecoveryCase parse_recovery_case(const std::string& name);
std::string to_string(RecoveryCase c);

struct RecoveryInstance {
  NearnessProblem problem;
  Matrix X_true;
};

/// A = B X C with Gaussian B, C and a planted X: unconstrained; F X G = H with
/// F (n/4)×n and G n×(n/4); eigenvalue 1 by orthogonal similarity of a block
/// triangular matrix; rank n/4 by a factor product. Throws NumericError if the
/// planted property does not verify.
RecoveryInstance make_recovery_instance(RecoveryCase c, Index n, SchattenP p, std::uint64_t seed);

struct RunSettings {
  SolverOptions options;
  std::optional<double> mu_scale;  // mu = mu_scale / (1 + ‖A‖_F) when set
  bool timing = true;
};

struct TrialResult {
  ResultRow row;
  SolveReport report;
};

TrialResult run_recovery_trial(RecoveryCase c, Index n, SchattenP p, std::uint64_t seed,
                               const RunSettings& settings);

// ---- system identification -------------------------------------------------

struct SysidInstance {
  Matrix X_hat;  // (n+1)×(n+1) Hankel
  Matrix C;      // (n+1)×⌈ratio·n⌉, full column rank
  double delta = 0.5;
  NearnessProblem problem;  // A = 0, B = I, S = Hankel ∩ ball(X_hat, delta), p = 1
};

SysidInstance make_sysid_instance(Index n, double delta, double ratio, std::uint64_t seed);

/// Largest max − min over the anti-diagonals of X.
double antidiagonal_spread(const Matrix& X);

struct SysidResult {
  ResultRow row;
  SolveReport report;
  double hankel_spread = 0.0;
};

SysidResult run_sysid(const SysidInstance& inst, Index n, std::uint64_t seed, const RunSettings& settings);

// ---- CFAR --------------------------------------------------------------------

struct CfarInstance {
  Matrix A;  // G Gᵀ, symmetric PSD
  Matrix B;  // n×p', full column rank (or I when identity_b)
  NearnessProblem problem;  // C = Bᵀ, S = PSD cone, p = inf
};

CfarInstance make_cfar_instance(Index n, Index p_prime, std::uint64_t seed, bool identity_b = false);

struct CfarResult {
  ResultRow row;
  SolveReport report;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

CfarResult run_cfar(const CfarInstance& inst, std::uint64_t seed, const RunSettings& settings);

// ---- the 2×2 example ---------------------------------------------------------

struct MirskyRow {
  SchattenP p = SchattenP::one();
  double objective = 0.0;
  double expected = 0.0;
  double residual_00 = 0.0;
  double expected_residual_00 = 0.0;
  bool closed_form_certificate_ok = false;  // S_p built from the expected residual
  bool solver_certificate_ok = false;  // μΔ from the run
  long iterations = 0;
  bool converged = false;
  bool pass = false;
};

struct MirskyResult {
  std::vector<MirskyRow> rows;
  bool pass = false;
};

NearnessProblem mirsky_problem(SchattenP p);

/// With tamper the (1,2) entry of every closed-form certificate flips sign.
MirskyResult run_mirsky(double mu, bool tamper = false);

void print_mirsky(std::ostream& out, const MirskyResult& r);

}  // namespace nearkit::cli

#include "nearkit/detail/run_indexed.hpp"
