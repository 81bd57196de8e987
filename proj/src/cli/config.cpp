#include "nearkit/config.hpp"

#include "nearkit/errors.hpp"
#include "nearkit/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nearkit::cli {

namespace {

double number_or_inf(const Json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "Infinity"))
    return std::numeric_limits<double>::infinity();
  throw DomainError(what + " must be a number or \"inf\"");
}

const Json& field(const Json& obj, const std::string& key, const std::string& kind) {
  if (!obj.contains(key)) throw DomainError("constraint '" + kind + "' needs field '" + key + "'");
  return obj.at(key);
}

KronFactors factors_value(const Json& v, const Config& cfg) {
  KronFactors f;
  f.B1 = matrix_value(field(v, "B1", "factors"), cfg, "B1");
  f.B2 = matrix_value(field(v, "B2", "factors"), cfg, "B2");
  f.C1 = matrix_value(field(v, "C1", "factors"), cfg, "C1");
  f.C2 = matrix_value(field(v, "C2", "factors"), cfg, "C2");
  return f;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

Config Config::parse(const std::string& text, std::filesystem::path base) {
  Config c;
  try {
    c.doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what(), 0);
  }
  if (!c.doc.is_object()) throw ParseError("config must be a JSON object", 1);
  c.base = std::move(base);
  return c;
}

std::filesystem::path Config::resolve(const std::string& relative) const {
  const std::filesystem::path p(relative);
  return p.is_absolute() ? p : base / p;
}

Matrix matrix_value(const Json& v, const Config& cfg, const std::string& what) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.rfind("identity:", 0) == 0) {
      const long n = std::stol(s.substr(9));
      if (n < 1) throw DomainError(what + ": identity size must be positive");
      return Matrix::Identity(n, n);
    }
    return read_matrix(cfg.resolve(s));
  }
  if (v.is_array() && !v.empty() && v.front().is_array()) {
    const Index rows = static_cast<Index>(v.size());
    const Index cols = static_cast<Index>(v.front().size());
    if (cols == 0) throw DomainError(what + ": empty row");
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      if (static_cast<Index>(v[i].size()) != cols) throw DomainError(what + ": ragged inline matrix");
      for (Index j = 0; j < cols; ++j) M(i, j) = v[i][j].get<double>();
    }
    require_finite(M, what);
    return M;
  }
  if (v.is_array() && !v.empty()) {
    Matrix M(static_cast<Index>(v.size()), 1);
    for (Index i = 0; i < M.rows(); ++i) M(i, 0) = v[i].get<double>();
    require_finite(M, what);
    return M;
  }
  throw DomainError(what + " must be a CSV path, \"identity:n\" or an inline array");
}

SchattenP schatten_value(const Json& v) { return SchattenP::from_value(number_or_inf(v, "p")); }

std::vector<SchattenP> schatten_list(const Json& v) {
  std::vector<SchattenP> out;
  if (v.is_array())
    for (const auto& e : v) out.push_back(schatten_value(e));
  else
    out.push_back(schatten_value(v));
  return out;
}

std::vector<Index> index_list(const Json& v) {
  std::vector<Index> out;
  if (v.is_array())
    for (const auto& e : v) out.push_back(e.get<Index>());
  else
    out.push_back(v.get<Index>());
  return out;
}

ConstraintSpec constraint_value(const Json& v, const Config& cfg) {
  if (v.is_string()) return constraint_value(Json{{"kind", v}}, cfg);
  if (!v.is_object() || !v.contains("kind")) throw DomainError("constraint must be an object with a 'kind'");
  const std::string kind = v.at("kind").get<std::string>();

  if (kind == "unconstrained") return Unconstrained{};
  if (kind == "rank") return RankAtMost{field(v, "r", kind).get<Index>()};
  if (kind == "eigenvalue") return PrescribedEigenvalue{field(v, "lambda", kind).get<double>()};
  if (kind == "kron_rank") {
    KronRankAtMost k;
    k.r = field(v, "r", kind).get<Index>();
    const auto s = field(v, "xshape", kind).get<std::vector<Index>>();
    if (s.size() != 4) throw DomainError("kron_rank xshape is [m1, m2, n1, n2]");
    k.xshape = {s[0], s[1], s[2], s[3]};
    if (v.contains("factors")) k.factors = factors_value(v.at("factors"), cfg);
    return k;
  }
  if (kind == "partial_trace") {
    PrescribedPartialTrace t;
    t.lambda = field(v, "lambda", kind).get<double>();
    t.p = field(v, "p", kind).get<Index>();
    if (v.contains("factors")) t.factors = factors_value(v.at("factors"), cfg);
    return t;
  }
  if (kind == "affine") {
    AffineSubspace a;
    for (const auto& b : field(v, "basis", kind)) a.basis.push_back(matrix_value(b, cfg, "basis"));
    a.offset = matrix_value(field(v, "offset", kind), cfg, "offset");
    return a;
  }
  if (kind == "product") {
    return ProductConstraint{matrix_value(field(v, "F", kind), cfg, "F"), matrix_value(field(v, "G", kind), cfg, "G"),
                             matrix_value(field(v, "H", kind), cfg, "H")};
  }
  if (kind == "ball") {
    FrobeniusBall b;
    b.center = matrix_value(field(v, "center", kind), cfg, "center");
    b.radius = number_or_inf(field(v, "radius", kind), "radius");
    return b;
  }
  if (kind == "psd") return PsdCone{};
  if (kind == "intersection") {
    Intersection in;
    for (const auto& m : field(v, "members", kind)) in.members.push_back(constraint_value(m, cfg));
    return in;
  }
  return Structural{parse_structure(kind)};
}

AffineTerm term_value(const Json& v, const Config& cfg) {
  if (v.is_null()) return NoTerm{};
  const std::string kind = v.at("kind").get<std::string>();
  if (kind == "none") return NoTerm{};
  if (kind == "left")
    return LeftRankOne{matrix_value(field(v, "D", kind), cfg, "D"), matrix_value(field(v, "e", kind), cfg, "e").col(0)};
  if (kind == "right")
    return RightRankOne{matrix_value(field(v, "d", kind), cfg, "d").col(0), matrix_value(field(v, "E", kind), cfg, "E")};
  throw DomainError("affine term kind must be none, left or right");
}

SolverOptions solver_options(const Config& cfg) {
  SolverOptions o;
  o.mu = value_or(cfg, "mu", o.mu);
  o.tol = value_or(cfg, "tol", o.tol);
  o.max_iter = value_or(cfg, "max_iter", o.max_iter);
  o.seed = value_or<std::uint64_t>(cfg, "seed", o.seed);
  o.record_trace = value_or(cfg, "trace", true);
  const std::string init = value_or<std::string>(cfg, "init", "standard");
  if (init == "standard") o.init = Init::standard;
  else if (init == "zeros") o.init = Init::zeros;
  else if (init == "random") o.init = Init::random;
  else throw DomainError("init must be standard, zeros or random");
  if (!(o.mu > 0.0)) throw DomainError("mu must be positive");
  if (!(o.tol > 0.0)) throw DomainError("tol must be positive");
  if (o.max_iter < 1) throw DomainError("max_iter must be >= 1");
  return o;
}

double resolve_mu(const Config& cfg, const SolverOptions& opt, const Matrix& A) {
  if (!cfg.has("mu_scale")) return opt.mu;
  const double c = cfg.doc.at("mu_scale").get<double>();
  if (!(c > 0.0)) throw DomainError("mu_scale must be positive");
  return c / (1.0 + A.norm());
}

NearnessProblem problem_from(const Config& cfg) {
  NearnessProblem p;
  if (!cfg.has("A")) throw DomainError("config needs 'A'");
  p.A = matrix_value(cfg.doc.at("A"), cfg, "A");
  p.B = cfg.has("B") ? matrix_value(cfg.doc.at("B"), cfg, "B") : Matrix::Identity(p.A.rows(), p.A.rows());
  p.C = cfg.has("C") ? matrix_value(cfg.doc.at("C"), cfg, "C") : Matrix::Identity(p.A.cols(), p.A.cols());
  p.constraint = cfg.has("constraint") ? constraint_value(cfg.doc.at("constraint"), cfg) : ConstraintSpec{};
  p.term = cfg.has("term") ? term_value(cfg.doc.at("term"), cfg) : AffineTerm{NoTerm{}};
  p.p = cfg.has("p") ? schatten_value(cfg.doc.at("p")) : SchattenP::one();
  p.validate();
  validate(p.constraint);
  return p;
}

}  // namespace nearkit::cli
