// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/walk_engine.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "gaplab/parallel.hpp"

namespace gaplab {

void SystemSpec::finalize() {
  if (!dynamics) throw std::invalid_argument(name + ": missing dynamics");
  if (!displacement) throw std::invalid_argument(name + ": missing displacement");
  if (weights.empty() || weights.size() != dynamics->num_letters())
    throw std::invalid_argument(name + ": weight count does not match generator count");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument(name + ": negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument(name + ": weights do not sum to 1");
  if (D <= 0) throw std::invalid_argument(name + ": displacement dimension must be positive");
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw std::invalid_argument(name + ": displacement bound must be finite");
  if (inverse.empty()) inverse.assign(weights.size(), -1);
  if (inverse.size() != weights.size()) throw std::invalid_argument(name + ": inverse table size mismatch");
  if (letter_names.size() != weights.size()) {
    letter_names.clear();
    for (std::size_t i = 0; i < weights.size(); ++i) letter_names.push_back("g" + std::to_string(i));
  }
  sampler = AliasTable(weights);
}

SystemSpec with_displacement(const SystemSpec& spec, Displacement c, double bound) {
  SystemSpec s = spec;
  s.displacement = std::move(c);
  s.displacement_kind = "custom";
  s.bound = bound;
  return s;
}

SystemSpec with_mean_subtracted(const SystemSpec& spec, const std::vector<double>& shift) {
  if (static_cast<int>(shift.size()) != spec.D) throw std::invalid_argument("with_mean_subtracted: dimension mismatch");
  Displacement base = spec.displacement;
  double extra = 0.0;
  for (double v : shift) extra = std::max(extra, std::abs(v));
  return with_displacement(
      spec,
      [base, shift](std::size_t a, const State& x, double* out) {
        base(a, x, out);
        for (std::size_t j = 0; j < shift.size(); ++j) out[j] -= shift[j];
      },
      spec.bound + extra);
}

StepResult step(const SystemSpec& spec, State& x, CounterRng& rng) {
  StepResult r{spec.sampler.sample(rng), std::vector<double>(static_cast<std::size_t>(spec.D))};
  spec.displacement(r.letter, x, r.increment.data());
  spec.dynamics->act(r.letter, x);
  return r;
}

State sample_base(const SystemSpec& spec, std::uint64_t seed, std::uint64_t path) {
  CounterRng rng(seed, path, Domain::base);
  return spec.dynamics->sample_base(rng);
}

Trajectory run(const SystemSpec& spec, std::int64_t n, std::uint64_t seed, std::int64_t thinning, std::uint64_t path) {
  if (n < 1) throw std::invalid_argument("run: n must be >= 1");
  Trajectory t;
  t.seed = seed;
  t.path = path;
  t.D = spec.D;
  t.letters.reserve(static_cast<std::size_t>(n));
  t.sums.reserve(static_cast<std::size_t>(n * spec.D));
  State x = sample_base(spec, seed, path);
  t.states.emplace_back(0, x);
  walk_path(
      spec, seed, path, n,
      [&](std::int64_t k, std::size_t a, const State& xk, const std::vector<double>& S) {
        t.letters.push_back(a);
        t.sums.insert(t.sums.end(), S.begin(), S.end());
        // x_{k−1} is passed in; retained states are recorded one step late.
        if (thinning > 0 && k > 1 && (k - 1) % thinning == 0) t.states.emplace_back(k - 1, xk);
      },
      &x);
  if (t.states.back().first != n) t.states.emplace_back(n, x);
  return t;
}

State act_word(const SystemSpec& spec, const std::vector<std::size_t>& letters, State x) {
  for (std::size_t a : letters) spec.dynamics->act(a, x);
  return x;
}

std::vector<double> cocycle_sum(const SystemSpec& spec, const std::vector<std::size_t>& letters, const State& x0) {
  std::vector<double> S(static_cast<std::size_t>(spec.D), 0.0), inc(S.size());
  State x = x0;
  for (std::size_t a : letters) {
    spec.displacement(a, x, inc.data());
    for (std::size_t j = 0; j < S.size(); ++j) S[j] += inc[j];
    spec.dynamics->act(a, x);
  }
  return S;
}

CenteringResult check_centering(const SystemSpec& spec, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("check_centering: need at least 2 samples");
  const std::size_t D = static_cast<std::size_t>(spec.D);
  const std::size_t blocks = std::min<std::size_t>(samples, 64);
  struct Partial {
    std::vector<double> sum, sq;
  };
  auto parts = parallel_map<Partial>(blocks, [&](std::size_t b) {
    Partial p{std::vector<double>(D, 0.0), std::vector<double>(D, 0.0)};
    std::vector<double> inc(D), avg(D);
    for (std::size_t i = samples * b / blocks; i < samples * (b + 1) / blocks; ++i) {
      State x = sample_base(spec, seed, i);
      std::fill(avg.begin(), avg.end(), 0.0);
      for (std::size_t a = 0; a < spec.num_letters(); ++a) {
        if (spec.weights[a] == 0.0) continue;
        spec.displacement(a, x, inc.data());
        for (std::size_t j = 0; j < D; ++j) avg[j] += spec.weights[a] * inc[j];
      }
      for (std::size_t j = 0; j < D; ++j) {
        p.sum[j] += avg[j];
        p.sq[j] += avg[j] * avg[j];
      }
    }
    return p;
  });
  CenteringResult r;
  r.samples = samples;
  r.estimate.assign(D, 0.0);
  r.stderr_.assign(D, 0.0);
  std::vector<double> sq(D, 0.0);
  for (auto& p : parts)
    for (std::size_t j = 0; j < D; ++j) {
      r.estimate[j] += p.sum[j];
      sq[j] += p.sq[j];
    }
  const double N = static_cast<double>(samples);
  for (std::size_t j = 0; j < D; ++j) {
    r.estimate[j] /= N;
    double var = std::max(0.0, sq[j] / N - r.estimate[j] * r.estimate[j]) * N / (N - 1.0);
    r.stderr_[j] = std::sqrt(var / N);
    // An identically zero estimator has zero error and is never flagged.
    if (std::abs(r.estimate[j]) > 4.0 * r.stderr_[j] && r.estimate[j] != 0.0) r.flagged = true;
  }
  return r;
}

double birkhoff_average(const SystemSpec& spec, const Observable& f, std::int64_t n, std::uint64_t seed,
                        const State* start) {
  if (n < 1) throw std::invalid_argument("birkhoff_average: n must be >= 1");
  State x = start ? *start : sample_base(spec, seed, 0);
  double sum = 0.0;
  walk_path(
      spec, seed, 0, n, [&](std::int64_t, std::size_t, const State& xk, const std::vector<double>&) { sum += f(xk); },
      &x);
  return sum / static_cast<double>(n);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "step";
  for (int j = 1; j <= t.D; ++j) os << ",S_" << j;
  os << '\n';
  for (std::int64_t k = 1; k <= t.n(); ++k) {
    os << k;
    const double* s = t.S(k);
    for (int j = 0; j < t.D; ++j) os << ',' << format_double(s[j]);
    os << '\n';
  }
}

}  // namespace gaplab
