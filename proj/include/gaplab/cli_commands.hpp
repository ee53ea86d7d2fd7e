// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaplab/report.hpp"
#include "gaplab/walk_engine.hpp"

namespace gaplab {

enum ExitCode : int { kExitOk = 0, kExitAcceptance = 1, kExitConfig = 2, kExitNonConvergence = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A well-formed request for something the scenario cannot provide.
class UnsupportedFeature : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct RunConfig {
  Json scenario = "torus_sl2";  // catalogue name or inline object
  std::int64_t n = 1000;
  std::int64_t paths = 100;
  std::optional<std::uint64_t> seed;
  std::vector<std::int64_t> horizons;
  std::vector<double> ball_radius{10.0, 20.0, 40.0};
  double fourier_radius = 20.0;
  std::optional<std::vector<std::vector<double>>> lambda_grid;
  std::string out = ".";
  std::int64_t thinning = 0;
  std::int64_t csv_paths = 4;
  std::int64_t centering_samples = 10000;
  int threads = 0;  // 0: GAPLAB_THREADS, then hardware concurrency
  bool quick = false;
  std::vector<int> criteria;  // empty: all
  bool record_runtime = false;

  // Validates against the run_config schema, then the cross-field rules; throws ConfigError.
  static RunConfig from_json(const Json& j);
  // Fields that determine results; out and threads are excluded.
  Json canonical() const;
  std::string hash() const;
  void validate() const;
  std::uint64_t require_seed() const;
};

// Parses and applies a JSON config file on top of cfg.
RunConfig load_config_file(const std::string& path);

SystemSpec build_spec(const Json& scenario);

// File name -> contents. Commands compute these first so reruns can be compared byte for byte.
using Outputs = std::map<std::string, std::string>;

struct CommandResult {
  int status = kExitOk;
  Outputs files;
  std::vector<std::string> messages;
};

CommandResult run_simulate(const RunConfig& cfg);
CommandResult run_spectral(const RunConfig& cfg);
CommandResult run_verify(const RunConfig& cfg, std::ostream& table, std::ostream* progress);

void write_outputs(const std::string& dir, const Outputs& files);

int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_spectral(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_list_scenarios(std::ostream& out);

}  // namespace gaplab
