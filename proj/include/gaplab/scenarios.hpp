// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaplab/group_algebra.hpp"
#include "gaplab/phase_space.hpp"
#include "gaplab/walk_engine.hpp"

namespace gaplab {

class TorusDynamics : public Dynamics {
 public:
  explicit TorusDynamics(std::vector<IntMatrix> gens);
  std::string space() const override { return "torus"; }
  std::size_t num_letters() const override { return gens_.size(); }
  void act(std::size_t letter, State& x) const override;
  State sample_base(CounterRng& rng) const override;
  const std::vector<IntMatrix>& matrices() const { return gens_; }
  int d() const { return gens_.front().dim(); }

 private:
  std::vector<IntMatrix> gens_;
  std::vector<TorusAction> actions_;
};

class NilDynamics : public Dynamics {
 public:
  struct Generator {
    HeisenbergElement alpha;
    IntMatrix D;
  };
  explicit NilDynamics(std::vector<Generator> gens);
  std::string space() const override { return "nilmanifold"; }
  std::size_t num_letters() const override { return gens_.size(); }
  void act(std::size_t letter, State& x) const override;
  State sample_base(CounterRng& rng) const override;
  const std::vector<Generator>& generators() const { return gens_; }
  int d() const { return gens_.front().D.dim(); }

 private:
  std::vector<Generator> gens_;
  std::vector<NilAffine> maps_;
};

class SceneryDynamics : public Dynamics {
 public:
  SceneryDynamics(int k, SceneryLaw law, bool use_cache);
  std::string space() const override { return "scenery"; }
  std::size_t num_letters() const override { return static_cast<std::size_t>(2 * k_); }
  void act(std::size_t letter, State& x) const override;
  State sample_base(CounterRng& rng) const override;
  const SceneryLaw& law() const { return law_; }
  int k() const { return k_; }
  // Letter 2i is g_{i+1}, letter 2i+1 is its inverse.
  static int signed_generator(std::size_t letter) {
    int g = static_cast<int>(letter / 2) + 1;
    return (letter % 2 == 0) ? g : -g;
  }

 private:
  int k_;
  SceneryLaw law_;
  bool use_cache_;
};

class MotionDynamics : public Dynamics {
 public:
  MotionDynamics(std::vector<UnitaryMatrix> rotations, std::vector<Eigen::VectorXcd> taus);
  std::string space() const override { return "motion"; }
  std::size_t num_letters() const override { return rot_.size(); }
  void act(std::size_t letter, State& x) const override;
  State sample_base(CounterRng& rng) const override;
  const std::vector<UnitaryMatrix>& rotations() const { return rot_; }
  const std::vector<Eigen::VectorXcd>& taus() const { return tau_; }
  int d() const { return rot_.front().dim(); }

 private:
  std::vector<UnitaryMatrix> rot_;
  std::vector<Eigen::VectorXcd> tau_;
};

class TrivialDynamics : public Dynamics {
 public:
  explicit TrivialDynamics(std::size_t letters) : n_(letters) {}
  std::string space() const override { return "trivial"; }
  std::size_t num_letters() const override { return n_; }
  void act(std::size_t, State&) const override {}
  State sample_base(CounterRng&) const override { return TrivialPoint{}; }

 private:
  std::size_t n_;
};

// Sawtooth displacement; with_inverses interleaves M1, M1⁻¹, M2, M2⁻¹, ... with uniform weights.
SystemSpec scenario_torus(std::string name, const std::vector<IntMatrix>& base, bool with_inverses);
SystemSpec scenario_torus_sl2();
SystemSpec scenario_qA_torus3();
// q(A₁) alone: not ergodic, it fixes a character.
SystemSpec scenario_qA_single();
SystemSpec scenario_heisenberg_H7(double c0 = std::sqrt(2.0) - 1.0);
SystemSpec scenario_scenery_free_group(int k, const std::vector<std::vector<double>>& C, const std::vector<double>& eta,
                                       int D, bool use_cache = false);
// Defaults: k = 2, C = {±e1, ±e2, ±e3, ±(1,1,0)}, uniform η.
SystemSpec scenario_scenery_free_group();
SystemSpec scenario_motion_group(int d, const std::vector<UnitaryMatrix>& rotations,
                                 const std::vector<Eigen::VectorXcd>& taus);
SystemSpec scenario_motion_group();
// ±1 coin on a one-point space.
SystemSpec scenario_coin();

std::vector<std::vector<double>> default_scenery_support();

struct CosetCheck {
  int affine_rank = 0;
  // Index of the lattice spanned by differences in Z^D; 0 when rank-deficient.
  BigInt lattice_index = 0;
  bool spanning() const { return lattice_index == 1; }
};
// C must be integral.
CosetCheck scenery_coset_check(const std::vector<std::vector<double>>& C);

struct FixedPointCheck {
  bool has_fixed_point = false;
  double residual = 0.0;  // least-squares residual of the stacked system
  Eigen::VectorXcd v;
};
// Solves a_i(v + τ_i) = v for all i jointly.
FixedPointCheck motion_fixed_point(const std::vector<UnitaryMatrix>& rotations,
                                   const std::vector<Eigen::VectorXcd>& taus, double tol = 1e-9);
// The same test on the system a_i v + τ_i = v.
FixedPointCheck motion_fixed_point_affine(const std::vector<UnitaryMatrix>& rotations,
                                          const std::vector<Eigen::VectorXcd>& taus, double tol = 1e-9);

std::vector<UnitaryMatrix> default_motion_rotations();

// (x, y) part of a nilmanifold point as a torus point of T^{2d}.
ToralPoint nil_torus_factor(const NilPoint& p);

struct ScenarioInfo {
  std::string name;
  std::string space;
  int D;
  std::string description;
  bool fourier_supported;  // P_λ and the Poisson solver apply
};

std::vector<ScenarioInfo> list_scenarios();
// Throws std::invalid_argument for unknown names.
SystemSpec build_scenario(const std::string& name);

/// Torus scenario in matrix form, for the truncated-operator tools.
struct TorusModel {
  int d = 0;
  std::vector<IntMatrix> gens;
  std::vector<double> weights;
  bool sawtooth = false;
};

std::optional<TorusModel> torus_model(const SystemSpec& spec);

}  // namespace gaplab
