// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

// gaplab: batch front-end for the random-walk experiments.
//
//   gaplab list-scenarios
//   gaplab simulate --scenario torus_sl2 --paths 100 --seed 7 --out run1
//   gaplab spectral --scenario torus_sl2 --ball-radius 20 --seed 7 --out spec1
//   gaplab verify [--quick]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gaplab/cli_commands.hpp"
#include "gaplab/parallel.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> scenario;
  std::optional<std::int64_t> n, paths, thinning;
  std::optional<std::uint64_t> seed;
  std::optional<double> ball_radius;
  std::optional<std::string> out;
  std::optional<int> threads;
  bool quick = false;
  std::vector<int> criteria;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration (flags override its fields)");
  cmd->add_option("--scenario", f.scenario, "scenario name, see list-scenarios");
  cmd->add_option("--seed", f.seed, "master seed (mandatory for simulate and spectral)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads (default: GAPLAB_THREADS, then all cores)");
}

gaplab::RunConfig merge(const Flags& f) {
  gaplab::RunConfig c = f.config.empty() ? gaplab::RunConfig{} : gaplab::load_config_file(f.config);
  if (f.scenario) c.scenario = *f.scenario;
  if (f.n) c.n = *f.n;
  if (f.paths) c.paths = *f.paths;
  if (f.thinning) c.thinning = *f.thinning;
  if (f.seed) c.seed = *f.seed;
  if (f.ball_radius) c.ball_radius = {*f.ball_radius};
  if (f.out) c.out = *f.out;
  if (f.threads) c.threads = *f.threads;
  if (f.quick) c.quick = true;
  if (!f.criteria.empty()) c.criteria = f.criteria;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaplab: random walks driven by group actions with a spectral gap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gaplab::tool_version());
  Flags f;

  auto* sim = app.add_subcommand("simulate", "run walks, write trajectory CSVs and summary.json");
  add_common(sim, f);
  sim->add_option("--n", f.n, "steps per path");
  sim->add_option("--paths", f.paths, "number of independent paths");
  sim->add_option("--thinning", f.thinning, "keep every k-th state in trajectories (0: endpoints only)");

  auto* spec = app.add_subcommand("spectral", "dual radius, k(lambda), R_mu scan and Poisson residual");
  add_common(spec, f);
  spec->add_option("--ball-radius", f.ball_radius, "Fourier truncation radius R for the dual operator");

  auto* ver = app.add_subcommand("verify", "run the acceptance criteria");
  add_common(ver, f);
  ver->add_flag("--quick", f.quick, "reduced sizes; statistical criteria become advisory");
  ver->add_option("--criteria", f.criteria, "run only these criterion ids")->delimiter(',');
  // Shared flags are accepted everywhere so one config drives every subcommand.
  ver->add_option("--paths", f.paths, "ignored by verify")->group("");

  app.add_subcommand("list-scenarios", "print the scenario catalogue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gaplab::kExitConfig;
  }

  try {
    if (app.got_subcommand("list-scenarios")) return gaplab::cmd_list_scenarios(std::cout);
    gaplab::RunConfig cfg = merge(f);
    gaplab::set_thread_count(cfg.threads);
    if (app.got_subcommand("simulate")) return gaplab::cmd_simulate(cfg, std::cerr);
    if (app.got_subcommand("spectral")) return gaplab::cmd_spectral(cfg, std::cerr);
    return gaplab::cmd_verify(cfg, std::cout, std::cerr);
  } catch (const gaplab::ConfigError& e) {
    std::cerr << "gaplab: " << e.what() << '\n';
    return gaplab::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "gaplab: error: " << e.what() << '\n';
    return gaplab::kExitNonConvergence;
  }
}
