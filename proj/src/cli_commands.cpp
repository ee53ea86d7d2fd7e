// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/cli_commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gaplab/acceptance.hpp"
#include "gaplab/scenarios.hpp"
#include "gaplab/spectral.hpp"
#include "gaplab/statistics.hpp"

namespace gaplab {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j[key].get<T>() : fallback;
}

std::string scenario_name(const Json& s) {
  if (s.is_string()) return s.get<std::string>();
  return s.value("name", "inline_" + s["space"].get<std::string>());
}

// Points of the ball |p| ≤ R in Z^d, estimated from the volume, to refuse hopeless requests early.
double ball_volume(int d, double R) {
  return std::pow(std::numbers::pi, d / 2.0) * std::pow(R + 0.5, d) / std::tgamma(d / 2.0 + 1.0);
}

constexpr double kMaxBallPoints = 4e6;

Json header(const RunConfig& cfg, const char* command) {
  Json j;
  j["tool"] = "gaplab";
  j["version"] = tool_version();
  j["config_hash"] = cfg.hash();
  j["command"] = command;
  return j;
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
  auto errs = validate_schema(schema("run_config"), j);
  if (!errs.empty()) {
    std::string msg = "config does not match the run_config schema:";
    for (const auto& e : errs) msg += "\n  " + (e.empty() ? std::string("/") : e);
    throw ConfigError(msg);
  }
  RunConfig c;
  if (j.contains("scenario")) c.scenario = j["scenario"];
  c.n = get_or<std::int64_t>(j, "n", c.n);
  c.paths = get_or<std::int64_t>(j, "paths", c.paths);
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  c.horizons = get_or(j, "horizons", c.horizons);
  c.ball_radius = get_or(j, "ball_radius", c.ball_radius);
  c.fourier_radius = get_or(j, "fourier_radius", c.fourier_radius);
  if (j.contains("lambda_grid")) c.lambda_grid = j["lambda_grid"].get<std::vector<std::vector<double>>>();
  c.out = get_or(j, "out", c.out);
  c.thinning = get_or<std::int64_t>(j, "thinning", c.thinning);
  c.csv_paths = get_or<std::int64_t>(j, "csv_paths", c.csv_paths);
  c.centering_samples = get_or<std::int64_t>(j, "centering_samples", c.centering_samples);
  c.threads = get_or(j, "threads", c.threads);
  c.quick = get_or(j, "quick", c.quick);
  c.criteria = get_or(j, "criteria", c.criteria);
  c.record_runtime = get_or(j, "record_runtime", c.record_runtime);
  return c;
}

Json RunConfig::canonical() const {
  Json j;
  j["scenario"] = scenario;
  j["n"] = n;
  j["paths"] = paths;
  if (seed) j["seed"] = *seed;
  j["horizons"] = horizons;
  j["ball_radius"] = ball_radius;
  j["fourier_radius"] = fourier_radius;
  if (lambda_grid) j["lambda_grid"] = *lambda_grid;
  j["thinning"] = thinning;
  j["csv_paths"] = csv_paths;
  j["centering_samples"] = centering_samples;
  j["quick"] = quick;
  j["criteria"] = criteria;
  j["record_runtime"] = record_runtime;
  return j;
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical().dump()); }

void RunConfig::validate() const {
  // Re-run the schema on the merged config so flag overrides get the same checks as files.
  Json j = canonical();
  j["out"] = out;
  j["threads"] = threads;
  auto errs = validate_schema(schema("run_config"), j);
  if (!errs.empty()) throw ConfigError("invalid configuration: " + errs.front());
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1]) throw ConfigError("invalid configuration: horizons must be increasing");
  for (auto h : horizons)
    if (h > n) throw ConfigError("invalid configuration: horizons must not exceed n");
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ConfigError("invalid configuration: seed is mandatory (pass --seed or set \"seed\")");
  return *seed;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return RunConfig::from_json(j);
}

SystemSpec build_spec(const Json& scenario) {
  try {
    if (scenario.is_string()) return build_scenario(scenario.get<std::string>());
    const std::string space = scenario.at("space").get<std::string>();
    const std::string name = scenario_name(scenario);
    if (space == "torus") {
      if (!scenario.contains("generators")) throw ConfigError("inline torus scenario needs \"generators\"");
      if (scenario.contains("weights") || scenario.contains("support") || scenario.contains("k"))
        throw ConfigError("inline torus scenario takes only generators and symmetric");
      std::vector<IntMatrix> gens;
      for (const auto& g : scenario["generators"]) gens.push_back(IntMatrix::from_rows(g.get<std::vector<std::vector<long long>>>()));
      return scenario_torus(name, gens, scenario.value("symmetric", true));
    }
    if (space == "scenery") {
      if (!scenario.contains("support")) throw ConfigError("inline scenery scenario needs \"support\"");
      auto C = scenario["support"].get<std::vector<std::vector<double>>>();
      std::vector<double> eta = scenario.contains("weights") ? scenario["weights"].get<std::vector<double>>()
                                                             : std::vector<double>(C.size(), 1.0 / double(C.size()));
      const int D = static_cast<int>(C.front().size());
      SystemSpec s = scenario_scenery_free_group(scenario.value("k", 2), C, eta, D);
      s.name = name;
      return s;
    }
    throw ConfigError("unknown scenario space " + space);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

CommandResult run_simulate(const RunConfig& cfg) {
  cfg.validate();
  const std::uint64_t seed = cfg.require_seed();
  const SystemSpec spec = build_spec(cfg.scenario);
  const auto t0 = std::chrono::steady_clock::now();
  CommandResult res;
  Json summary = header(cfg, "simulate");
  summary["config"] = cfg.canonical();
  summary["scenario"] = spec.name;
  summary["D"] = spec.D;
  summary["n"] = cfg.n;
  summary["paths"] = cfg.paths;
  summary["seed"] = seed;
  summary["streams"] = {{"walk", "CounterRng(seed, path, walk), counter = step"},
                        {"base_point", "CounterRng(seed, path, base)"},
                        {"centering", "CounterRng(seed, block, sample)"}};

  const std::string comment = "# gaplab " + tool_version() + " config_hash=" + cfg.hash() + "\n";
  Json files = Json::array();
  for (std::int64_t p = 0; p < std::min(cfg.csv_paths, cfg.paths); ++p) {
    Trajectory t = run(spec, cfg.n, seed, cfg.thinning, static_cast<std::uint64_t>(p));
    std::ostringstream os;
    os << comment;
    write_trajectory_csv(os, t);
    char name[64];
    std::snprintf(name, sizeof name, "trajectory_%04lld.csv", static_cast<long long>(p));
    res.files[name] = os.str();
    files.push_back(name);
  }

  summary["centering"] = to_json(check_centering(spec, static_cast<std::size_t>(cfg.centering_samples), seed));

  Eigen::MatrixXd end = sample_endpoints(spec, cfg.n, static_cast<std::size_t>(cfg.paths), seed);
  Json flags = Json::array();
  if (!end.allFinite()) {
    flags.push_back("non_finite_sums");
    res.status = kExitNonConvergence;
  }
  std::vector<double> mean(static_cast<std::size_t>(spec.D), 0.0);
  double mean_norm = 0.0;
  for (Eigen::Index p = 0; p < end.rows(); ++p) {
    for (int j = 0; j < spec.D; ++j) mean[static_cast<std::size_t>(j)] += end(p, j) / double(end.rows());
    mean_norm += end.row(p).norm() / double(end.rows());
  }
  Json endpoints;
  endpoints["mean"] = to_json(mean);
  endpoints["covariance"] = end.rows() >= 2 ? to_json(Eigen::MatrixXd(empirical_covariance(end) / double(cfg.n)))
                                            : Json::array();
  endpoints["mean_norm"] = mean_norm;
  summary["endpoints"] = endpoints;
  if (!cfg.horizons.empty()) {
    RecurrenceReport r = recurrence_profile(spec, cfg.horizons, static_cast<std::size_t>(cfg.paths), seed);
    summary["recurrence"] = {{"horizons", r.horizons},
                             {"median_running_minimum", to_json(r.median)},
                             {"q10", to_json(r.q10)},
                             {"q90", to_json(r.q90)}};
  }
  files.push_back("summary.json");
  summary["files"] = files;
  summary["flags"] = flags;
  if (cfg.record_runtime)
    summary["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.files["summary.json"] = dump_json(summary);
  return res;
}

CommandResult run_spectral(const RunConfig& cfg) {
  cfg.validate();
  const std::uint64_t seed = cfg.require_seed();
  const SystemSpec spec = build_spec(cfg.scenario);
  auto model = torus_model(spec);
  if (!model)
    throw UnsupportedFeature("unsupported feature: spectral analysis of " + spec.name + " (" +
                             spec.dynamics->space() +
                             " dynamics). The dual operator and P_lambda are only truncated in a Fourier basis on a "
                             "torus; this scenario has no character basis to truncate in.");
  const bool fourier = spec.dynamics->space() == "torus" && spec.displacement_kind == "sawtooth";
  if (cfg.lambda_grid && !fourier)
    throw UnsupportedFeature("unsupported feature: P_lambda for " + spec.name +
                             ". The twisted operator needs a torus scenario with the sawtooth displacement.");
  for (double R : cfg.ball_radius)
    if (ball_volume(model->d, R) > kMaxBallPoints)
      throw ConfigError("ball radius " + std::to_string(R) + " in dimension " + std::to_string(model->d) +
                        " exceeds the truncation size limit");
  if (fourier && ball_volume(model->d, cfg.fourier_radius) > kMaxBallPoints)
    throw ConfigError("fourier_radius exceeds the truncation size limit");

  CommandResult res;
  Json rep = header(cfg, "spectral");
  rep["scenario"] = spec.name;
  rep["seed"] = seed;
  Json dual = Json::array();
  bool any_converged = false;
  for (double R : cfg.ball_radius) {
    TruncatedOperator L = build_dual_operator(model->gens, model->weights, FrequencyBall(model->d, R));
    SpectralReport r = spectral_radius(L, 512, 1e-10, 3, seed);
    r.norm_bound = L.norm_bound();
    any_converged = any_converged || r.converged;
    dual.push_back(to_json(r));
  }
  rep["dual_radius"] = dual;
  Json skipped = Json::array();
  if (fourier) {
    const int d = model->d;
    FrequencyBall ball(d, cfg.fourier_radius, true);
    CVec e0 = CVec::Zero(static_cast<Eigen::Index>(ball.size()));
    e0(ball.zero_index()) = 1.0;
    std::vector<std::vector<double>> grid;
    if (cfg.lambda_grid) {
      grid = *cfg.lambda_grid;
    } else {
      grid.emplace_back(static_cast<std::size_t>(d), 0.0);
      for (double t : {0.05, 0.1, 0.2})
        for (int j = 0; j < d; ++j) {
          std::vector<double> l(static_cast<std::size_t>(d), 0.0);
          l[static_cast<std::size_t>(j)] = t;
          grid.push_back(l);
        }
    }
    Json kt = Json::array();
    for (const auto& l : grid) {
      if (static_cast<int>(l.size()) != d) throw ConfigError("lambda_grid entries must have dimension " + std::to_string(d));
      EigenResult e = dominant_eigen(build_P_lambda(*model, l, ball), &e0);
      kt.push_back({{"lambda", to_json(l)},
                    {"re", e.value.real()},
                    {"im", e.value.imag()},
                    {"abs", std::abs(e.value)},
                    {"residual", e.residual},
                    {"converged", e.converged},
                    {"tie", e.tie}});
    }
    rep["k_lambda"] = kt;

    const double tol = 1e-2;
    auto axis = axis_grid(d, std::numbers::pi / 4, 2 * std::numbers::pi);
    RMuScan scan = scan_R_mu(*model, axis, cfg.fourier_radius, tol);
    Json pts = Json::array();
    for (std::size_t i = 0; i < axis.size(); ++i)
      pts.push_back({{"lambda", to_json(axis[i])}, {"radius", scan.radius[i]}, {"flagged", bool(scan.flagged[i])}});
    Json flagged = Json::array();
    for (const auto& p : scan.flagged_points()) flagged.push_back(to_json(p));
    rep["r_mu"] = {{"tol", tol}, {"ball_radius", cfg.fourier_radius}, {"points", pts}, {"flagged", flagged}};

    PoissonSolution sol = solve_poisson_sawtooth(*model, cfg.fourier_radius);
    Json resid = Json::array();
    for (const auto& c : sol.per_component) resid.push_back(c.residual);
    ModifiedDisplacement md(spec, *model, sol);
    CounterRng rng(seed, 0, Domain::aux);
    double sup = 0.0;
    for (int t = 0; t < 1000; ++t) {
      ToralPoint x;
      for (int j = 0; j < d; ++j) x.coords.push_back(frac1(rng.uniform()));
      for (double v : md.projected_conditional_mean(x)) sup = std::max(sup, std::abs(v));
    }
    rep["poisson"] = {{"ball_radius", cfg.fourier_radius},
                      {"residual", resid},
                      {"conditional_mean_points", 1000},
                      {"conditional_mean_sup", sup}};
  } else {
    skipped.push_back("k_lambda, r_mu and poisson: P_lambda needs a torus scenario with the sawtooth displacement");
  }
  rep["skipped"] = skipped;
  if (!any_converged) res.status = kExitNonConvergence;
  res.files["spectral.json"] = dump_json(rep);
  return res;
}

CommandResult run_verify(const RunConfig& cfg, std::ostream& table, std::ostream* progress) {
  cfg.validate();
  AcceptanceOptions opt;
  opt.quick = cfg.quick;
  if (cfg.seed) opt.seed = *cfg.seed;
  opt.only = cfg.criteria;
  opt.progress = progress;
  auto results = run_acceptance(opt);
  print_table(table, results, false);
  const bool ok = mandatory_passed(results);
  Json rep = header(cfg, "verify");
  rep["quick"] = cfg.quick;
  rep["seed"] = opt.seed;
  Json crit = Json::array();
  for (const auto& r : results) crit.push_back(to_json(r));
  rep["criteria"] = crit;
  rep["mandatory_passed"] = ok;
  CommandResult res;
  res.status = ok ? kExitOk : kExitAcceptance;
  res.files["verify.json"] = dump_json(rep);
  return res;
}

void write_outputs(const std::string& dir, const Outputs& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, body] : files) {
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    f << body;
    if (!f) throw std::runtime_error("cannot write " + name + " in " + dir);
  }
}

namespace {

void report(std::ostream& log, const std::string& dir, const CommandResult& r) {
  for (const auto& [name, body] : r.files) log << "wrote " << (std::filesystem::path(dir) / name).string() << '\n';
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  CommandResult r = run_simulate(cfg);
  write_outputs(cfg.out, r.files);
  report(log, cfg.out, r);
  return r.status;
}

int cmd_spectral(const RunConfig& cfg, std::ostream& log) {
  CommandResult r = run_spectral(cfg);
  write_outputs(cfg.out, r.files);
  report(log, cfg.out, r);
  if (r.status == kExitNonConvergence) log << "no dual radius estimate converged\n";
  return r.status;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  CommandResult r = run_verify(cfg, out, &log);
  write_outputs(cfg.out, r.files);
  report(log, cfg.out, r);
  return r.status;
}

int cmd_list_scenarios(std::ostream& out) {
  for (const auto& s : list_scenarios()) {
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-12s D=%d  %s%s\n", s.name.c_str(), s.space.c_str(), s.D,
                  s.description.c_str(), s.fourier_supported ? "  [P_lambda]" : "");
    out << line;
  }
  return kExitOk;
}

}  // namespace gaplab
