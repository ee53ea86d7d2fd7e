// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "gaplab/group_algebra.hpp"
#include "gaplab/rng.hpp"

namespace gaplab {

/// Point of T^d with every coordinate in [−1/2, 1/2).
struct ToralPoint {
  std::vector<double> coords;

  int d() const { return static_cast<int>(coords.size()); }
  friend bool operator==(const ToralPoint&, const ToralPoint&) = default;
};

// Representative of v mod 1 in [−1/2, 1/2).
double frac1(double v);
ToralPoint frac_rep(const std::vector<double>& v);

/// Integer matrix acting on T^d, cached in floating point.
class TorusAction {
 public:
  explicit TorusAction(const IntMatrix& m);
  void apply_inplace(double* x) const;
  ToralPoint operator()(const ToralPoint& x) const;
  int d() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXd m_;
};

ToralPoint torus_apply(const IntMatrix& m, const ToralPoint& x);

/// Point of H_{2d+1}/D_{2d+1}: x, y ∈ [0,1)^d, z ∈ [0,1).
struct NilPoint {
  HeisenbergElement rep;
  friend bool operator==(const NilPoint&, const NilPoint&) = default;
};

// Right-multiplies g by the integral element chosen greedily on x, then y, then z.
NilPoint nil_reduce(const HeisenbergElement& g);
void nil_reduce_inplace(HeisenbergElement& g);
NilPoint nil_apply(const HeisenbergElement& alpha, const IntMatrix& D, const NilPoint& p);

/// p -> nil_reduce(alpha · τ_D(p)), with τ_D precomputed.
class NilAffine {
 public:
  NilAffine(HeisenbergElement alpha, const IntMatrix& D);
  void apply_inplace(HeisenbergElement& g) const;
  const HeisenbergElement& alpha() const { return alpha_; }

 private:
  HeisenbergElement alpha_;
  HeisenbergAutomorphism tau_;
  mutable HeisenbergElement scratch_;
};

/// Law η on a finite set C ⊂ R^D.
struct SceneryLaw {
  std::vector<std::vector<double>> support;
  std::vector<double> weights;
  AliasTable table;

  SceneryLaw() = default;
  SceneryLaw(std::vector<std::vector<double>> support, std::vector<double> weights);
  int D() const { return support.empty() ? 0 : static_cast<int>(support.front().size()); }
  std::vector<double> mean() const;
};

// Fingerprint of a reduced word under a scenery seed; folds letters left to right.
std::uint64_t word_fingerprint(std::uint64_t scenery_seed, const FreeWord& w);
std::uint64_t extend_fingerprint(std::uint64_t prefix, int letter);
// Index into law.support of the value sitting at the site with this fingerprint.
std::size_t scenery_index(const SceneryLaw& law, std::uint64_t fingerprint);

/**
 * Walker position in a lazily generated scenery.
 *
 * prefix_fp[k] is the fingerprint of the first k letters of `word`, so moving
 * the walker and looking up its current site are both O(1).
 */
struct SceneryPoint {
  std::uint64_t scenery_seed = 0;
  FreeWord word;
  std::vector<std::uint64_t> prefix_fp;
  std::shared_ptr<std::unordered_map<std::uint64_t, std::uint32_t>> cache;

  static SceneryPoint make(std::uint64_t seed, bool use_cache = false);
  // Right-multiplies the walker position by generator `letter`.
  void move(int letter);
  std::uint64_t current_fingerprint() const { return prefix_fp.back(); }
};

const std::vector<double>& scenery_lookup(const SceneryLaw& law, const SceneryPoint& s, const FreeWord& w);
const std::vector<double>& scenery_current(const SceneryLaw& law, const SceneryPoint& s);

struct MotionState {
  UnitaryMatrix x;
  Eigen::VectorXcd v;
};

// (a·x, v + x*τ_a)
MotionState motion_apply(const UnitaryMatrix& a, const Eigen::VectorXcd& tau_a, const MotionState& s);
void motion_apply_inplace(const UnitaryMatrix& a, const Eigen::VectorXcd& tau_a, MotionState& s);
// x*τ as [Re v_1, Im v_1, ..., Re v_d, Im v_d].
void motion_displacement(const UnitaryMatrix& x, const Eigen::VectorXcd& tau, double* out);
void reorthonormalize(UnitaryMatrix& u);

}  // namespace gaplab
