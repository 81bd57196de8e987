#pragma once

// Descriptions of the feasible set S and of the optional affine term.

#include "nearkit/matlin.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nearkit {

struct Unconstrained {};

struct RankAtMost {
  Index r = 1;
};

/// B = B1 ⊗ B2 and C = C1 ⊗ C2.
struct KronFactors {
  Matrix B1, B2, C1, C2;
};

/// rank of rearrange2(X) at most r, with X partitioned by xshape.
/// Without factors the multipliers must be identities.
struct KronRankAtMost {
  Index r = 1;
  BlockShape xshape;
  std::optional<KronFactors> factors;
};

struct PrescribedEigenvalue {
  double lambda = 0.0;
};

/// X is p²×p² and trP(X (W ⊗ I)) = λ W for some W ≠ 0.
struct PrescribedPartialTrace {
  double lambda = 0.0;
  Index p = 1;
  std::optional<KronFactors> factors;
};

/// offset + span(basis).
struct AffineSubspace {
  std::vector<Matrix> basis;
  Matrix offset;
};

/// F X G = H.
struct ProductConstraint {
  Matrix F, G, H;
};

struct Structural {
  Structure kind = Structure::symmetric;
};

struct FrobeniusBall {
  Matrix center;
  double radius = 0.0;
};

struct PsdCone {};

struct ConstraintSpec;

struct Intersection {
  std::vector<ConstraintSpec> members;
};

struct ConstraintSpec {
  using Variant = std::variant<Unconstrained, RankAtMost, KronRankAtMost, PrescribedEigenvalue,
                               PrescribedPartialTrace, AffineSubspace, ProductConstraint, Structural,
                               FrobeniusBall, PsdCone, Intersection>;
  Variant value;

  ConstraintSpec() : value(Unconstrained{}) {}
  template <class T>
  ConstraintSpec(T v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  template <class T>
  bool is() const { return std::holds_alternative<T>(value); }
  template <class T>
  const T& as() const { return std::get<T>(value); }
};

/// Short tag such as "rank", "hankel", "intersection(hankel,ball)".
std::string kind_name(const ConstraintSpec& c);

/// Throws DomainError when a descriptor violates its own invariants.
void validate(const ConstraintSpec& c);

bool is_convex(const ConstraintSpec& c);

/// How far X is from S: 0 for members, growing with the distance. Uses the
/// natural residual of each kind (σ_{r+1}, ‖FXG − H‖, distance to a ball, ...).
double constraint_violation(const ConstraintSpec& c, const Matrix& X);

struct NoTerm {};

/// Adds D x eᵀ to the residual; x has as many entries as D has rows.
struct LeftRankOne {
  Matrix D;
  Vector e;
};

/// Adds d xᵀ E to the residual; x has as many entries as E has rows.
struct RightRankOne {
  Vector d;
  Matrix E;
};

using AffineTerm = std::variant<NoTerm, LeftRankOne, RightRankOne>;

inline bool has_term(const AffineTerm& t) { return !std::holds_alternative<NoTerm>(t); }

/// B X C − (affine term evaluated at x); the residual is M minus this.
Matrix apply_model(const Matrix& B, const Matrix& X, const Matrix& C, const AffineTerm& term,
                   const std::optional<Vector>& x);

}  // namespace nearkit
