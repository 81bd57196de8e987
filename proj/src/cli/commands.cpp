#include "nearkit/cli.hpp"

#include "nearkit/config.hpp"
#include "nearkit/errors.hpp"
#include "nearkit/experiments.hpp"
#include "nearkit/io.hpp"
#include "nearkit/random.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

namespace nearkit::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool tamper = false;
  std::optional<double> mu;
};

Config load_config(const Flags& f) {
  Config cfg = f.config.empty() ? Config{} : Config::load(f.config);
  if (f.seed) cfg.doc["seed"] = *f.seed;
  if (f.mu) cfg.doc["mu"] = *f.mu;
  return cfg;
}

fs::path output_dir(const Flags& f, const Config& cfg, const char* fallback) {
  fs::path dir = !f.out.empty() ? fs::path(f.out) : fs::path(value_or<std::string>(cfg, "out", fallback));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

RunSettings run_settings(const Config& cfg) {
  RunSettings s;
  s.options = solver_options(cfg);
  if (cfg.has("mu_scale")) s.mu_scale = cfg.doc.at("mu_scale").get<double>();
  if (s.mu_scale && !(*s.mu_scale > 0.0)) throw DomainError("mu_scale must be positive");
  s.timing = value_or(cfg, "timing", true);
  return s;
}

void write_rows(const fs::path& dir, const std::vector<ResultRow>& rows) {
  auto out = open_out(dir / "results.csv");
  write_results(out, rows);
}

// ---- solve ---------------------------------------------------------------------

int cmd_solve(const Flags& f) {
  const Config cfg = load_config(f);
  const NearnessProblem problem = problem_from(cfg);
  SolverOptions opt = solver_options(cfg);
  opt.mu = resolve_mu(cfg, opt, problem.A);
  opt.record_trace = false;
  const bool timing = value_or(cfg, "timing", true);
  const fs::path dir = output_dir(f, cfg, "nearkit-out");

  auto trace = open_out(dir / "trace.csv");
  trace << "k,objective,step_norm,constraint_residual,elapsed_ms\n";
  const auto on_row = [&](const TraceRow& r) {
    trace << r.k << ',' << format_double(r.objective) << ',' << format_double(r.step_norm) << ','
          << format_double(r.constraint_residual) << ',' << format_double(timing ? r.elapsed_ms : 0.0) << '\n';
  };
  const SolveReport rep = solve(problem, opt, value_or(cfg, "trace", true) ? TraceCallback(on_row) : TraceCallback());
  trace.close();

  write_matrix(dir / "X_star.csv", rep.X_star);
  if (rep.x_star) write_matrix(dir / "x_star.csv", Matrix(*rep.x_star));

  Json j;
  j["objective"] = rep.objective;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["attainment_guaranteed"] = rep.attainment_guaranteed;
  j["constraint_residual"] = rep.constraint_residual;
  j["constraint"] = kind_name(problem.constraint);
  j["p"] = problem.p.label();
  j["mu"] = opt.mu;
  j["tol"] = opt.tol;
  if (value_or(cfg, "certify", true)) {
    const CertifyResult c = certify(problem, rep, opt.mu, opt.seed);
    j["certificate"] = {{"ok", c.ok},
                        {"subgradient_ok", c.subgradient_ok},
                        {"sampled", c.sampled},
                        {"worst_violation", c.worst_violation},
                        {"value", c.value}};
  }
  write_json(dir / "report.json", j);

  std::cout << "objective " << format_double(rep.objective) << " after " << rep.iterations << " iterations"
            << (rep.converged ? "" : " (max_iter reached)") << '\n';
  if (!rep.attainment_guaranteed) std::cout << "note: no attainment guarantee for PSD with general B\n";
  return kOk;
}

// ---- recover-bench -------------------------------------------------------------

int cmd_recover_bench(const Flags& f) {
  const Config cfg = load_config(f);
  const RunSettings settings = run_settings(cfg);
  const auto ns = cfg.has("n") ? index_list(cfg.doc.at("n")) : std::vector<Index>{32};
  const auto ps = cfg.has("p") ? schatten_list(cfg.doc.at("p"))
                               : std::vector<SchattenP>{SchattenP::one(), SchattenP::finite(1.5),
                                                        SchattenP::infinity()};
  std::vector<RecoveryCase> cases;
  if (cfg.has("cases"))
    for (const auto& c : cfg.doc.at("cases")) cases.push_back(parse_recovery_case(c.get<std::string>()));
  else
    cases = {RecoveryCase::unconstrained, RecoveryCase::product, RecoveryCase::eigenvalue, RecoveryCase::rank};
  const Index trials = value_or<Index>(cfg, "trials", 10);
  const bool save_truth = value_or(cfg, "save_truth", true);
  const std::uint64_t base = settings.options.seed;
  const fs::path dir = output_dir(f, cfg, "results/recover");

  struct Task {
    RecoveryCase c;
    Index n;
    SchattenP p;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const Index n : ns)
    for (const auto c : cases)
      for (const auto& p : ps)
        for (Index t = 0; t < trials; ++t)
          tasks.push_back({c, n, p, derive_seed(base, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(n),
                                                static_cast<std::uint64_t>(t))});

  if (save_truth) {
    fs::create_directories(dir / "truth");
    std::map<std::uint64_t, bool> written;
    for (const auto& t : tasks) {
      if (written[t.seed]) continue;
      written[t.seed] = true;
      write_matrix(dir / "truth" / (to_string(t.c) + "_n" + std::to_string(t.n) + "_" + std::to_string(t.seed) + ".csv"),
                   make_recovery_instance(t.c, t.n, t.p, t.seed).X_true);
    }
  }

  const std::function<ResultRow(std::size_t)> job = [&](std::size_t i) {
    return run_recovery_trial(tasks[i].c, tasks[i].n, tasks[i].p, tasks[i].seed, settings).row;
  };
  const auto rows = run_indexed(tasks.size(), trial_threads(tasks.size()), job);
  write_rows(dir, rows);

  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.forward_error.value_or(0.0));
  std::cout << rows.size() << " trials, worst forward error " << format_double(worst) << " -> "
            << (dir / "results.csv").string() << '\n';
  return kOk;
}

// ---- sysid ---------------------------------------------------------------------

int cmd_sysid(const Flags& f) {
  const Config cfg = load_config(f);
  const RunSettings settings = run_settings(cfg);
  const auto ns = cfg.has("n") ? index_list(cfg.doc.at("n")) : std::vector<Index>{10, 20};
  const double delta = value_or(cfg, "delta", 0.5);
  const double ratio = value_or(cfg, "ratio", 0.8);
  const Index trials = value_or<Index>(cfg, "trials", 1);
  const fs::path dir = output_dir(f, cfg, "results/sysid");

  std::vector<std::pair<Index, std::uint64_t>> tasks;
  for (const Index n : ns)
    for (Index t = 0; t < trials; ++t)
      tasks.emplace_back(n, derive_seed(settings.options.seed, static_cast<std::uint64_t>(n),
                                        static_cast<std::uint64_t>(t)));

  const std::function<SysidResult(std::size_t)> job = [&](std::size_t i) {
    const auto [n, seed] = tasks[i];
    return run_sysid(make_sysid_instance(n, delta, ratio, seed), n, seed, settings);
  };
  const auto results = run_indexed(tasks.size(), trial_threads(tasks.size()), job);

  std::vector<ResultRow> rows;
  bool ok = true;
  for (const auto& r : results) {
    rows.push_back(r.row);
    if (r.hankel_spread > 1e-12) {
      std::cerr << "sysid n=" << r.row.n << ": output is not Hankel (spread " << format_double(r.hankel_spread)
                << ")\n";
      ok = false;
    }
  }
  write_rows(dir, rows);
  std::cout << rows.size() << " instances -> " << (dir / "results.csv").string() << '\n';
  return ok ? kOk : kNumeric;
}

// ---- cfar ----------------------------------------------------------------------

int cmd_cfar(const Flags& f) {
  const Config cfg = load_config(f);
  const RunSettings settings = run_settings(cfg);
  const auto ns = cfg.has("n") ? index_list(cfg.doc.at("n")) : std::vector<Index>{10};
  const bool all_p = !cfg.has("p_prime") || (cfg.doc.at("p_prime").is_string() &&
                                              cfg.doc.at("p_prime").get<std::string>() == "all");
  const bool with_identity = value_or(cfg, "include_identity", true);
  const fs::path dir = output_dir(f, cfg, "results/cfar");

  struct Task {
    Index n, pp;
    bool identity;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const Index n : ns) {
    std::vector<Index> pps;
    if (all_p)
      for (Index k = 1; k <= n; ++k) pps.push_back(k);
    else
      pps = index_list(cfg.doc.at("p_prime"));
    for (const Index pp : pps)
      tasks.push_back({n, pp, false, derive_seed(settings.options.seed, static_cast<std::uint64_t>(n),
                                                 static_cast<std::uint64_t>(pp))});
    if (with_identity) tasks.push_back({n, n, true, derive_seed(settings.options.seed, static_cast<std::uint64_t>(n), 0)});
  }

  const std::function<CfarResult(std::size_t)> job = [&](std::size_t i) {
    const Task& t = tasks[i];
    return run_cfar(make_cfar_instance(t.n, t.pp, t.seed, t.identity), t.seed, settings);
  };
  const auto results = run_indexed(tasks.size(), trial_threads(tasks.size()), job);

  std::vector<ResultRow> rows;
  bool ok = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    ResultRow row = results[i].row;
    if (tasks[i].identity) row.constraint = "psd_identity";
    const auto& r = results[i];
    if (r.lambda_min < -1e-10 * std::max(0.0, r.lambda_max)) {
      std::cerr << "cfar n=" << row.n << " " << row.constraint << ": X is not PSD (lambda_min "
                << format_double(r.lambda_min) << ")\n";
      ok = false;
    }
    rows.push_back(std::move(row));
  }
  write_rows(dir, rows);
  std::cout << rows.size() << " instances -> " << (dir / "results.csv").string() << '\n';
  return ok ? kOk : kNumeric;
}

// ---- example-mirsky ------------------------------------------------------------

int cmd_mirsky(const Flags& f) {
  const Config cfg = load_config(f);
  std::vector<double> mus;
  if (cfg.has("mu") && cfg.doc.at("mu").is_array())
    mus = cfg.doc.at("mu").get<std::vector<double>>();
  else
    mus.push_back(value_or(cfg, "mu", 1.0));
  const bool tamper = f.tamper || value_or(cfg, "tamper", false);

  bool pass = true;
  for (const double mu : mus) {
    std::cout << "mu = " << format_double(mu) << '\n';
    const MirskyResult r = run_mirsky(mu, tamper);
    print_mirsky(std::cout, r);
    pass = pass && r.pass;
  }
  return pass ? kOk : kNumeric;
}

// ---- prox ----------------------------------------------------------------------

int cmd_prox(const Flags& f) {
  const Config cfg = load_config(f);
  if (!cfg.has("M")) throw DomainError("prox config needs 'M'");
  const Matrix M = matrix_value(cfg.doc.at("M"), cfg, "M");
  const double mu = value_or(cfg, "mu", 1.0);
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  const SchattenP p = cfg.has("p") ? schatten_value(cfg.doc.at("p")) : SchattenP::one();
  const fs::path dir = output_dir(f, cfg, "nearkit-out");

  const Matrix Y = prox(M, mu, p);
  write_matrix(dir / "Y.csv", Y);
  const Vector sm = svd(M).sigma, sy = svd(Y).sigma;
  Json j;
  j["p"] = p.label();
  j["mu"] = mu;
  j["prox_objective"] = prox_objective(Y, M, mu, p);
  j["sigma_in"] = std::vector<double>(sm.data(), sm.data() + sm.size());
  j["sigma_out"] = std::vector<double>(sy.data(), sy.data() + sy.size());
  write_json(dir / "report.json", j);
  std::cout << "prox objective " << format_double(prox_objective(Y, M, mu, p)) << '\n';
  return kOk;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericError*>(&e)) return kNumeric;
  if (dynamic_cast<const CapabilityError*>(&e)) return kCapability;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const ParseError*>(&e) || dynamic_cast<const Json::exception*>(&e))
    return kInput;
  return kNumeric;
}

int run(int argc, char** argv) {
  CLI::App app{"Generalized matrix nearness in Schatten norms"};
  app.require_subcommand(1);
  Flags flags;

  const auto common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config,-c", flags.config, "JSON run configuration");
    if (config_required) opt->required();
    opt->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Override the config seed");
    sub->add_option("--out,-o", flags.out, "Output directory");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Solve one nearness problem");
  common(solve_cmd, true);
  auto* bench_cmd = app.add_subcommand("recover-bench", "Matrix recovery with planted solutions");
  common(bench_cmd, false);
  auto* sysid_cmd = app.add_subcommand("sysid", "Hankel system identification, nuclear norm");
  common(sysid_cmd, false);
  auto* cfar_cmd = app.add_subcommand("cfar", "PSD-constrained spectral-norm nearness");
  common(cfar_cmd, false);
  auto* mirsky_cmd = app.add_subcommand("example-mirsky", "2x2 rank-one example for p = 1, 2, inf");
  common(mirsky_cmd, false);
  mirsky_cmd->add_flag("--tamper", flags.tamper, "Flip a sign in every closed-form certificate");
  mirsky_cmd->add_option("--mu", flags.mu, "Penalty parameter");
  auto* prox_cmd = app.add_subcommand("prox", "Apply a Schatten prox to a matrix");
  common(prox_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    const double self_test = rearrange3_self_test();
    if (!(self_test <= 1e-13)) {
      std::cerr << "error: rearrangement self-test failed (error " << format_double(self_test) << ")\n";
      return kNumeric;
    }
    if (*solve_cmd) return cmd_solve(flags);
    if (*bench_cmd) return cmd_recover_bench(flags);
    if (*sysid_cmd) return cmd_sysid(flags);
    if (*cfar_cmd) return cmd_cfar(flags);
    if (*mirsky_cmd) return cmd_mirsky(flags);
    if (*prox_cmd) return cmd_prox(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kInput;
}

}  // namespace nearkit::cli
