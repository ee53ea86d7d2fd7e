// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gaplab/phase_space.hpp"
#include "gaplab/rng.hpp"

namespace gaplab {

// One-point space for i.i.d. walks.
struct TrivialPoint {
  friend bool operator==(const TrivialPoint&, const TrivialPoint&) = default;
};

using State = std::variant<TrivialPoint, ToralPoint, NilPoint, SceneryPoint, MotionState>;

/// Space-specific half of a walk: how generators act and how ν is sampled.
class Dynamics {
 public:
  virtual ~Dynamics() = default;
  virtual std::string space() const = 0;
  virtual std::size_t num_letters() const = 0;
  virtual void act(std::size_t letter, State& x) const = 0;
  virtual State sample_base(CounterRng& rng) const = 0;
};

// Writes c(a, x) into out[0..D).
using Displacement = std::function<void(std::size_t letter, const State& x, double* out)>;

struct SystemSpec {
  std::string name;
  std::vector<std::string> letter_names;
  std::vector<double> weights;
  // inverse[a] is the letter of a⁻¹, or −1 if absent.
  std::vector<int> inverse;
  int D = 0;
  // Enforced sup_a ‖c_a‖_∞.
  double bound = 0.0;
  std::shared_ptr<const Dynamics> dynamics;
  Displacement displacement;
  // "sawtooth", "scenery", "motion", "coin" or "custom"; gates the Fourier-based tools.
  std::string displacement_kind = "custom";
  AliasTable sampler;

  std::size_t num_letters() const { return weights.size(); }
  // Checks the SystemSpec invariants and builds the sampler; throws on violation.
  void finalize();
};

// Returns a copy whose displacement has the constant `shift` subtracted.
SystemSpec with_mean_subtracted(const SystemSpec& spec, const std::vector<double>& shift);
SystemSpec with_displacement(const SystemSpec& spec, Displacement c, double bound);

struct StepResult {
  std::size_t letter;
  std::vector<double> increment;
};

StepResult step(const SystemSpec& spec, State& x, CounterRng& rng);

State sample_base(const SystemSpec& spec, std::uint64_t seed, std::uint64_t path);

/**
 * Runs path `path` of the walk for n steps, calling visit(k, letter, x_{k−1}, S_k)
 * after step k = 1..n. x_{k−1} is the state the increment was evaluated at.
 */
template <class Visitor>
void walk_path(const SystemSpec& spec, std::uint64_t seed, std::uint64_t path, std::int64_t n, Visitor&& visit,
               State* start = nullptr) {
  State x = start ? *start : sample_base(spec, seed, path);
  CounterRng rng(seed, path, Domain::walk);
  std::vector<double> S(static_cast<std::size_t>(spec.D), 0.0);
  std::vector<double> inc(static_cast<std::size_t>(spec.D), 0.0);
  const Dynamics& dyn = *spec.dynamics;
  for (std::int64_t k = 1; k <= n; ++k) {
    rng.seek(static_cast<std::uint64_t>(k));
    std::size_t a = spec.sampler.sample(rng);
    spec.displacement(a, x, inc.data());
    for (int j = 0; j < spec.D; ++j) S[j] += inc[j];
    visit(k, a, static_cast<const State&>(x), static_cast<const std::vector<double>&>(S));
    dyn.act(a, x);
  }
  if (start) *start = std::move(x);
}

struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  int D = 0;
  std::vector<std::size_t> letters;
  // (k, x_k) pairs; always contains k = 0 and k = n.
  std::vector<std::pair<std::int64_t, State>> states;
  // S_1..S_n, row-major n×D.
  std::vector<double> sums;

  std::int64_t n() const { return static_cast<std::int64_t>(letters.size()); }
  const double* S(std::int64_t k) const { return sums.data() + (k - 1) * D; }
};

// thinning = 0 keeps only x_0 and x_n; otherwise also every thinning-th state.
Trajectory run(const SystemSpec& spec, std::int64_t n, std::uint64_t seed, std::int64_t thinning = 0,
               std::uint64_t path = 0);

State act_word(const SystemSpec& spec, const std::vector<std::size_t>& letters, State x);
std::vector<double> cocycle_sum(const SystemSpec& spec, const std::vector<std::size_t>& letters, const State& x);

struct CenteringResult {
  std::vector<double> estimate;
  std::vector<double> stderr_;
  std::size_t samples = 0;
  bool flagged = false;  // some |estimate_j| > 4·stderr_j
};

// Monte Carlo over x ~ ν of Σ_a μ(a) c_a(x); the sum over a is exact.
CenteringResult check_centering(const SystemSpec& spec, std::size_t samples, std::uint64_t seed);

using Observable = std::function<double(const State&)>;
double birkhoff_average(const SystemSpec& spec, const Observable& f, std::int64_t n, std::uint64_t seed,
                        const State* start = nullptr);

// CSV with columns step,S_1..S_D; 17 significant digits, LF line endings.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
std::string format_double(double v);

}  // namespace gaplab
