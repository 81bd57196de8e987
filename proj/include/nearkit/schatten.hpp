#pragma once

// Schatten norms, their proximal maps, and norm-subgradient checks.

#include "nearkit/matlin.hpp"

#include <string>

namespace nearkit {

class SchattenP {
 public:
  enum class Kind { one, finite, infinity };

  static SchattenP one() { return SchattenP(Kind::one, 1.0); }
  static SchattenP infinity();
  /// Requires p > 1 strictly; throws DomainError otherwise.
  static SchattenP finite(double p);
  /// 1 → one, +inf → infinity, anything in (1, inf) → finite.
  static SchattenP from_value(double p);

  Kind kind() const { return kind_; }
  double value() const { return p_; }
  /// Exponent q of the dual norm, 1/p + 1/q = 1.
  double dual_value() const;
  /// "1", "1.5", "inf", ...
  std::string label() const;

  friend bool operator==(const SchattenP& a, const SchattenP& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  SchattenP(Kind k, double p) : kind_(k), p_(p) {}
  Kind kind_;
  double p_;
};

/// Subgradient data of a Schatten norm: G = U diag(g) Vᵀ.
struct DualCertificate {
  Vector g;
  Matrix G;
};

/// l_p norm of a vector (p may be inf).
double vector_norm(const Vector& s, double p);

double schatten_norm(const Matrix& M, SchattenP p);

/// The function the Y-step minimizes against: the norm for p = 1 and p = inf,
/// the p-th power of the norm for finite p.
double schatten_penalty(const Matrix& Y, SchattenP p);

/// schatten_penalty(Y) + (mu/2)·‖Y − M‖_F².
double prox_objective(const Matrix& Y, const Matrix& M, double mu, SchattenP p);

/// Root of p z^{p-1} + mu (z - s) = 0 on [0, s].
double scalar_root(double s, double mu, double p);

/// Singular-value maps behind the three prox operators.
Vector shrink_nuclear(const Vector& sigma, double mu);
Vector shrink_spectral(const Vector& sigma, double mu);
Vector shrink_schatten_p(const Vector& sigma, double mu, double p);

Matrix prox_nuclear(const Matrix& M, double mu);
Matrix prox_spectral(const Matrix& M, double mu);
Matrix prox_schatten_p(const Matrix& M, double mu, double p);
Matrix prox(const Matrix& M, double mu, SchattenP p);

/// g from the singular values of G.
DualCertificate make_certificate(const Matrix& G);

struct SubgradientCheck {
  bool ok = false;
  double value = 0.0;      // tr(Gᵀ M)
  double norm = 0.0;       // ‖M‖_{σ,p}
  double dual_norm = 0.0;  // ‖G‖_{σ,q}
};

/// Is G a subgradient of ‖·‖_{σ,p} at M, i.e. ‖G‖_{σ,q} ≤ 1 and
/// tr(GᵀM) = ‖M‖_{σ,p}, both to tol.
SubgradientCheck check_subgradient(const Matrix& M, const DualCertificate& cert, SchattenP p,
                                   double tol = 1e-8);

}  // namespace nearkit
