#pragma once

// JSON run configurations. Matrices inside a config are either a CSV path
// (relative to the config file) or an inline array of rows.

#include "nearkit/constraint.hpp"
#include "nearkit/dykstra.hpp"
#include "nearkit/schatten.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nearkit::cli {

using Json = nlohmann::json;

struct Config {
  Json doc = Json::object();
  std::filesystem::path base = ".";  // directory relative paths resolve against

  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text, std::filesystem::path base = ".");

  bool has(const std::string& key) const { return doc.contains(key); }
  std::filesystem::path resolve(const std::string& relative) const;
};

/// Matrix from a path string, an inline [[...], ...] array, or "identity:n".
Matrix matrix_value(const Json& v, const Config& cfg, const std::string& what);

/// 1, a number > 1, or "inf".
SchattenP schatten_value(const Json& v);
std::vector<SchattenP> schatten_list(const Json& v);

ConstraintSpec constraint_value(const Json& v, const Config& cfg);
AffineTerm term_value(const Json& v, const Config& cfg);

/// mu, tol, max_iter, seed, init. mu_scale c sets mu = c / (1 + ‖A‖_F) once A
/// is known; see resolve_mu.
SolverOptions solver_options(const Config& cfg);
double resolve_mu(const Config& cfg, const SolverOptions& opt, const Matrix& A);

/// A, B (default identity), C (default identity), constraint, term, p.
NearnessProblem problem_from(const Config& cfg);

template <class T>
T value_or(const Config& cfg, const std::string& key, T fallback) {
  return cfg.doc.contains(key) ? cfg.doc.at(key).get<T>() : fallback;
}

std::vector<Index> index_list(const Json& v);

}  // namespace nearkit::cli
