#include "nearkit/schatten.hpp"

#include "nearkit/errors.hpp"
#include "nearkit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nearkit {

namespace {

void require_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("prox parameter mu must be positive and finite");
}

Matrix rebuild(const SvdFactors& f, const Vector& s) {
  const Index k = s.size();
  return f.U.leftCols(k) * s.asDiagonal() * f.V.leftCols(k).transpose();
}

}  // namespace

SchattenP SchattenP::infinity() { return SchattenP(Kind::infinity, std::numeric_limits<double>::infinity()); }

SchattenP SchattenP::finite(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("finite Schatten index needs 1 < p < inf");
  return SchattenP(Kind::finite, p);
}

SchattenP SchattenP::from_value(double p) {
  if (p == 1.0) return one();
  if (std::isinf(p) && p > 0) return infinity();
  return finite(p);
}

double SchattenP::dual_value() const {
  switch (kind_) {
    case Kind::one: return std::numeric_limits<double>::infinity();
    case Kind::infinity: return 1.0;
    case Kind::finite: break;
  }
  return p_ / (p_ - 1.0);
}

std::string SchattenP::label() const {
  if (kind_ == Kind::infinity) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

double vector_norm(const Vector& s, double p) {
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s.cwiseAbs().maxCoeff();
  if (p == 1.0) return s.cwiseAbs().sum();
  if (p == 2.0) return s.norm();
  const double scale = s.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return scale * std::pow((s.cwiseAbs() / scale).array().pow(p).sum(), 1.0 / p);
}

double schatten_norm(const Matrix& M, SchattenP p) {
  if (p.kind() == SchattenP::Kind::finite && p.value() == 2.0) return M.norm();
  return vector_norm(svd(M).sigma, p.value());
}

double schatten_penalty(const Matrix& Y, SchattenP p) {
  const double n = schatten_norm(Y, p);
  return p.kind() == SchattenP::Kind::finite ? std::pow(n, p.value()) : n;
}

double prox_objective(const Matrix& Y, const Matrix& M, double mu, SchattenP p) {
  return schatten_penalty(Y, p) + 0.5 * mu * (Y - M).squaredNorm();
}

double scalar_root(double s, double mu, double p) {
  if (s < 0.0 || !std::isfinite(s)) throw DomainError("scalar_root needs a finite s >= 0");
  require_mu(mu);
  if (!(p > 1.0)) throw DomainError("scalar_root needs p > 1");
  if (s == 0.0) return 0.0;
  if (p == 2.0) return mu * s / (2.0 + mu);

  auto phi = [&](double z) { return p * std::pow(z, p - 1.0) + mu * (z - s); };
  auto dphi = [&](double z) { return p * (p - 1.0) * std::pow(z, p - 2.0) + mu; };

  // phi(0) = -mu s < 0 and phi(s) = p s^{p-1} > 0.
  double lo = 0.0, hi = s;
  const double width = 1e-12 * std::max(1.0, s);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  double z = 0.5 * (lo + hi);
  if (z <= 0.0) return 0.0;
  for (int it = 0; it < 5; ++it) {
    const double f = phi(z);
    if (f == 0.0) break;
    const double next = z - f / dphi(z);
    if (!(next > 0.0) || !std::isfinite(next)) break;
    if (std::abs(phi(next)) >= std::abs(f)) break;
    z = next;
  }
  return z;
}

Vector shrink_nuclear(const Vector& sigma, double mu) {
  require_mu(mu);
  return (sigma.array() - 1.0 / mu).cwiseMax(0.0).matrix();
}

Vector shrink_spectral(const Vector& sigma, double mu) {
  require_mu(mu);
  const Index n = sigma.size();
  Vector out = sigma;
  if (n == 0) return out;
  // Largest l with sigma_l >= (sum_{j<=l} sigma_j - 1/mu) / l; the predicate
  // holds on a prefix, so the last index where it is true is l.
  Index l = 1;
  double prefix = 0.0, prefix_l = sigma(0);
  for (Index i = 0; i < n; ++i) {
    prefix += sigma(i);
    if (sigma(i) >= (prefix - 1.0 / mu) / static_cast<double>(i + 1)) {
      l = i + 1;
      prefix_l = prefix;
    }
  }
  const double level = std::max(0.0, (prefix_l - 1.0 / mu) / static_cast<double>(l));
  out.head(l).setConstant(level);
  return out;
}

Vector shrink_schatten_p(const Vector& sigma, double mu, double p) {
  require_mu(mu);
  if (p == 2.0) return sigma * (mu / (2.0 + mu));
  return kernels::schatten_roots(sigma, mu, p);
}

Matrix prox_nuclear(const Matrix& M, double mu) {
  const SvdFactors f = svd(M);
  return rebuild(f, shrink_nuclear(f.sigma, mu));
}

Matrix prox_spectral(const Matrix& M, double mu) {
  const SvdFactors f = svd(M);
  return rebuild(f, shrink_spectral(f.sigma, mu));
}

Matrix prox_schatten_p(const Matrix& M, double mu, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("prox_schatten_p needs 1 < p < inf");
  require_mu(mu);
  if (p == 2.0) return M * (mu / (2.0 + mu));
  const SvdFactors f = svd(M);
  return rebuild(f, shrink_schatten_p(f.sigma, mu, p));
}

Matrix prox(const Matrix& M, double mu, SchattenP p) {
  switch (p.kind()) {
    case SchattenP::Kind::one: return prox_nuclear(M, mu);
    case SchattenP::Kind::infinity: return prox_spectral(M, mu);
    case SchattenP::Kind::finite: break;
  }
  return prox_schatten_p(M, mu, p.value());
}

DualCertificate make_certificate(const Matrix& G) {
  return {svd(G).sigma, G};
}

SubgradientCheck check_subgradient(const Matrix& M, const DualCertificate& cert, SchattenP p, double tol) {
  if (cert.G.rows() != M.rows() || cert.G.cols() != M.cols())
    throw DomainError("certificate shape does not match the matrix");
  SubgradientCheck out;
  out.value = (cert.G.array() * M.array()).sum();
  out.norm = schatten_norm(M, p);
  out.dual_norm = vector_norm(svd(cert.G).sigma, p.dual_value());
  out.ok = out.dual_norm <= 1.0 + tol && std::abs(out.value - out.norm) <= tol * (1.0 + out.norm);
  return out;
}

}  // namespace nearkit
