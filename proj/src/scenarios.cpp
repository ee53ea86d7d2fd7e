// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/scenarios.hpp"

#include <numeric>
#include <stdexcept>

namespace gaplab {

TorusDynamics::TorusDynamics(std::vector<IntMatrix> gens) : gens_(std::move(gens)) {
  if (gens_.empty()) throw std::invalid_argument("TorusDynamics: no generators");
  for (const auto& g : gens_) {
    if (g.dim() != gens_.front().dim()) throw std::invalid_argument("TorusDynamics: mixed dimensions");
    if (!is_unimodular(g)) throw std::invalid_argument("TorusDynamics: generator is not unimodular");
    actions_.emplace_back(g);
  }
}

void TorusDynamics::act(std::size_t letter, State& x) const {
  actions_[letter].apply_inplace(std::get<ToralPoint>(x).coords.data());
}

State TorusDynamics::sample_base(CounterRng& rng) const {
  ToralPoint p;
  p.coords.resize(static_cast<std::size_t>(d()));
  for (double& c : p.coords) c = frac1(rng.uniform() - 0.5);
  return p;
}

NilDynamics::NilDynamics(std::vector<Generator> gens) : gens_(std::move(gens)) {
  if (gens_.empty()) throw std::invalid_argument("NilDynamics: no generators");
  for (const auto& g : gens_) maps_.emplace_back(g.alpha, g.D);
}

void NilDynamics::act(std::size_t letter, State& x) const { maps_[letter].apply_inplace(std::get<NilPoint>(x).rep); }

State NilDynamics::sample_base(CounterRng& rng) const {
  // Lebesgue measure on the fundamental domain is the Haar probability of N/D.
  NilPoint p{HeisenbergElement::neutral(d())};
  for (double& v : p.rep.x) v = rng.uniform();
  for (double& v : p.rep.y) v = rng.uniform();
  p.rep.z = rng.uniform();
  return p;
}

SceneryDynamics::SceneryDynamics(int k, SceneryLaw law, bool use_cache)
    : k_(k), law_(std::move(law)), use_cache_(use_cache) {
  if (k < 1) throw std::invalid_argument("SceneryDynamics: k must be >= 1");
}

void SceneryDynamics::act(std::size_t letter, State& x) const {
  std::get<SceneryPoint>(x).move(signed_generator(letter));
}

State SceneryDynamics::sample_base(CounterRng& rng) const { return SceneryPoint::make(rng.next_u64(), use_cache_); }

MotionDynamics::MotionDynamics(std::vector<UnitaryMatrix> rotations, std::vector<Eigen::VectorXcd> taus)
    : rot_(std::move(rotations)), tau_(std::move(taus)) {
  if (rot_.empty() || rot_.size() != tau_.size()) throw std::invalid_argument("MotionDynamics: generator/translation mismatch");
  for (std::size_t i = 0; i < rot_.size(); ++i) {
    if (rot_[i].dim() != rot_.front().dim() || tau_[i].size() != rot_.front().dim())
      throw std::invalid_argument("MotionDynamics: dimension mismatch");
    if (rot_[i].unitarity_error() > 1e-12 || std::abs(rot_[i].det() - 1.0) > 1e-12)
      throw std::invalid_argument("MotionDynamics: rotation is not in SU(d)");
  }
}

void MotionDynamics::act(std::size_t letter, State& x) const {
  motion_apply_inplace(rot_[letter], tau_[letter], std::get<MotionState>(x));
}

State MotionDynamics::sample_base(CounterRng& rng) const {
  return MotionState{haar_unitary(d(), rng), Eigen::VectorXcd::Zero(d())};
}

namespace {

void sawtooth(std::size_t, const State& x, double* out) {
  const auto& c = std::get<ToralPoint>(x).coords;
  for (std::size_t j = 0; j < c.size(); ++j) out[j] = c[j];
}

}  // namespace

SystemSpec scenario_torus(std::string name, const std::vector<IntMatrix>& base, bool with_inverses) {
  if (base.empty()) throw std::invalid_argument("torus scenario: no generators");
  std::vector<IntMatrix> gens;
  std::vector<std::string> names;
  std::vector<int> inverse;
  for (std::size_t i = 0; i < base.size(); ++i) {
    gens.push_back(base[i]);
    names.push_back("M" + std::to_string(i + 1));
    if (with_inverses) {
      gens.push_back(inverse_unimodular(base[i]));
      names.push_back("M" + std::to_string(i + 1) + "^-1");
      inverse.push_back(static_cast<int>(2 * i + 1));
      inverse.push_back(static_cast<int>(2 * i));
    } else {
      inverse.push_back(-1);
    }
  }
  SystemSpec s;
  s.name = std::move(name);
  s.letter_names = names;
  s.weights.assign(gens.size(), 1.0 / static_cast<double>(gens.size()));
  s.inverse = inverse;
  s.D = gens.front().dim();
  s.bound = 0.5;
  s.dynamics = std::make_shared<TorusDynamics>(gens);
  s.displacement = sawtooth;
  s.displacement_kind = "sawtooth";
  s.finalize();
  return s;
}

namespace {

const IntMatrix& hyperbolic_a() {
  static const IntMatrix a = IntMatrix::from_rows({{2, 1}, {1, 1}});
  return a;
}

const IntMatrix& hyperbolic_b() {
  static const IntMatrix b = IntMatrix::from_rows({{1, 1}, {1, 2}});
  return b;
}

}  // namespace

SystemSpec scenario_torus_sl2() { return scenario_torus("torus_sl2", {hyperbolic_a(), hyperbolic_b()}, true); }

SystemSpec scenario_qA_torus3() {
  return scenario_torus("qA_torus3", {q_of(hyperbolic_a()), q_of(hyperbolic_b())}, true);
}

SystemSpec scenario_qA_single() { return scenario_torus("qA_single", {q_of(hyperbolic_a())}, false); }

SystemSpec scenario_heisenberg_H7(double c0) {
  const int d = 3;
  std::vector<NilDynamics::Generator> gens;
  std::vector<std::string> names;
  for (const IntMatrix* A : {&hyperbolic_a(), &hyperbolic_b()}) {
    IntMatrix q = q_of(*A);
    gens.push_back({HeisenbergElement::neutral(d), q});
    gens.push_back({HeisenbergElement::neutral(d), inverse_unimodular(q)});
    names.push_back("tau" + std::to_string(names.size() / 2 + 1));
    names.push_back(names.back() + "^-1");
  }
  HeisenbergElement alpha = HeisenbergElement::neutral(d);
  alpha.z = c0;
  gens.push_back({alpha, IntMatrix::identity(d)});
  gens.push_back({heis_inv(alpha), IntMatrix::identity(d)});
  names.push_back("alpha");
  names.push_back("alpha^-1");

  SystemSpec s;
  s.name = "heisenberg_H7";
  s.letter_names = names;
  s.weights.assign(gens.size(), 1.0 / static_cast<double>(gens.size()));
  s.inverse = {1, 0, 3, 2, 5, 4};
  s.D = 2 * d;
  s.bound = 0.5;
  s.dynamics = std::make_shared<NilDynamics>(gens);
  s.displacement = [](std::size_t, const State& x, double* out) {
    const auto& g = std::get<NilPoint>(x).rep;
    const std::size_t d = g.x.size();
    for (std::size_t j = 0; j < d; ++j) {
      out[j] = frac1(g.x[j]);
      out[d + j] = frac1(g.y[j]);
    }
  };
  s.displacement_kind = "sawtooth";
  s.finalize();
  return s;
}

std::vector<std::vector<double>> default_scenery_support() {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}, {1, 1, 0}, {-1, -1, 0}};
}

SystemSpec scenario_scenery_free_group(int k, const std::vector<std::vector<double>>& C, const std::vector<double>& eta,
                                       int D, bool use_cache) {
  if (C.empty() || C.size() != eta.size()) throw std::invalid_argument("scenery: support/law size mismatch");
  for (const auto& c : C)
    if (static_cast<int>(c.size()) != D) throw std::invalid_argument("scenery: support point has wrong dimension");
  SceneryLaw law(C, eta);
  double bound = 0.0;
  for (const auto& c : C)
    for (double v : c) bound = std::max(bound, std::abs(v));
  for (double m : law.mean())
    if (std::abs(m) > 1e-12 * std::max(1.0, bound)) throw std::invalid_argument("scenery: η is not centered");

  SystemSpec s;
  s.name = "scenery_free_group";
  for (int g = 1; g <= k; ++g) {
    s.letter_names.push_back("g" + std::to_string(g));
    s.letter_names.push_back("g" + std::to_string(g) + "^-1");
    s.inverse.push_back(2 * g - 1);
    s.inverse.push_back(2 * g - 2);
  }
  s.weights.assign(static_cast<std::size_t>(2 * k), 1.0 / (2.0 * k));
  s.D = D;
  s.bound = bound;
  auto dyn = std::make_shared<SceneryDynamics>(k, law, use_cache);
  s.dynamics = dyn;
  const SceneryDynamics* raw = dyn.get();
  s.displacement = [raw](std::size_t, const State& x, double* out) {
    const auto& v = scenery_current(raw->law(), std::get<SceneryPoint>(x));
    std::copy(v.begin(), v.end(), out);
  };
  s.displacement_kind = "scenery";
  s.finalize();
  return s;
}

SystemSpec scenario_scenery_free_group() {
  auto C = default_scenery_support();
  return scenario_scenery_free_group(2, C, std::vector<double>(C.size(), 1.0 / static_cast<double>(C.size())), 3);
}

std::vector<UnitaryMatrix> default_motion_rotations() {
  const double s = 1.0 / std::sqrt(5.0);
  using C = std::complex<double>;
  Eigen::MatrixXcd a1(2, 2), a2(2, 2);
  a1 << C(s, 2 * s), C(0, 0), C(0, 0), C(s, -2 * s);
  a2 << C(s, 0), C(2 * s, 0), C(-2 * s, 0), C(s, 0);
  return {UnitaryMatrix{a1}, UnitaryMatrix{a2}};
}

namespace {

FixedPointCheck solve_stacked(const std::vector<Eigen::MatrixXcd>& lhs, const std::vector<Eigen::VectorXcd>& rhs,
                              double tol) {
  const Eigen::Index d = lhs.front().cols();
  const Eigen::Index rows = d * static_cast<Eigen::Index>(lhs.size());
  Eigen::MatrixXcd A(rows, d);
  Eigen::VectorXcd b(rows);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    A.middleRows(static_cast<Eigen::Index>(i) * d, d) = lhs[i];
    b.segment(static_cast<Eigen::Index>(i) * d, d) = rhs[i];
  }
  FixedPointCheck r;
  r.v = A.completeOrthogonalDecomposition().solve(b);
  r.residual = (A * r.v - b).norm();
  r.has_fixed_point = r.residual <= tol * std::max(1.0, b.norm());
  return r;
}

}  // namespace

FixedPointCheck motion_fixed_point(const std::vector<UnitaryMatrix>& rotations,
                                   const std::vector<Eigen::VectorXcd>& taus, double tol) {
  // a(v + τ) = v  <=>  (a − I)v = −aτ
  std::vector<Eigen::MatrixXcd> lhs;
  std::vector<Eigen::VectorXcd> rhs;
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    const auto& a = rotations[i].m;
    lhs.push_back(a - Eigen::MatrixXcd::Identity(a.rows(), a.cols()));
    rhs.push_back(-(a * taus[i]));
  }
  return solve_stacked(lhs, rhs, tol);
}

FixedPointCheck motion_fixed_point_affine(const std::vector<UnitaryMatrix>& rotations,
                                          const std::vector<Eigen::VectorXcd>& taus, double tol) {
  std::vector<Eigen::MatrixXcd> lhs;
  std::vector<Eigen::VectorXcd> rhs;
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    const auto& a = rotations[i].m;
    lhs.push_back(a - Eigen::MatrixXcd::Identity(a.rows(), a.cols()));
    rhs.push_back(-taus[i]);
  }
  return solve_stacked(lhs, rhs, tol);
}

SystemSpec scenario_motion_group(int d, const std::vector<UnitaryMatrix>& rotations,
                                 const std::vector<Eigen::VectorXcd>& taus) {
  if (rotations.size() != taus.size() || rotations.empty())
    throw std::invalid_argument("motion_group: rotation/translation count mismatch");
  FixedPointCheck fp = motion_fixed_point(rotations, taus);
  if (fp.has_fixed_point) throw std::invalid_argument("motion_group: the affine action has a fixed point");
  // Symmetric set: (a, τ)⁻¹ = (a⁻¹, −aτ).
  std::vector<UnitaryMatrix> rot;
  std::vector<Eigen::VectorXcd> tau;
  SystemSpec s;
  s.name = "motion_group";
  double bound = 0.0;
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    if (rotations[i].dim() != d) throw std::invalid_argument("motion_group: rotation has wrong dimension");
    rot.push_back(rotations[i]);
    tau.push_back(taus[i]);
    rot.push_back(UnitaryMatrix{rotations[i].m.adjoint()});
    tau.push_back(-(rotations[i].m * taus[i]));
    s.letter_names.push_back("a" + std::to_string(i + 1));
    s.letter_names.push_back("a" + std::to_string(i + 1) + "^-1");
    s.inverse.push_back(static_cast<int>(2 * i + 1));
    s.inverse.push_back(static_cast<int>(2 * i));
    bound = std::max(bound, taus[i].norm());
  }
  s.weights.assign(rot.size(), 1.0 / static_cast<double>(rot.size()));
  s.D = 2 * d;
  s.bound = bound;
  auto dyn = std::make_shared<MotionDynamics>(rot, tau);
  const MotionDynamics* raw = dyn.get();
  s.dynamics = dyn;
  s.displacement = [raw](std::size_t a, const State& x, double* out) {
    motion_displacement(std::get<MotionState>(x).x, raw->taus()[a], out);
  };
  s.displacement_kind = "motion";
  s.finalize();
  return s;
}

SystemSpec scenario_motion_group() {
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2), e2 = Eigen::VectorXcd::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  return scenario_motion_group(2, default_motion_rotations(), {e1, e2});
}

SystemSpec scenario_coin() {
  SystemSpec s;
  s.name = "coin";
  s.letter_names = {"+1", "-1"};
  s.weights = {0.5, 0.5};
  s.inverse = {1, 0};
  s.D = 1;
  s.bound = 1.0;
  s.dynamics = std::make_shared<TrivialDynamics>(2);
  s.displacement = [](std::size_t a, const State&, double* out) { out[0] = a == 0 ? 1.0 : -1.0; };
  s.displacement_kind = "coin";
  s.finalize();
  return s;
}

CosetCheck scenery_coset_check(const std::vector<std::vector<double>>& C) {
  CosetCheck r;
  if (C.size() < 2) return r;
  const int D = static_cast<int>(C.front().size());
  std::vector<std::vector<long long>> diff;
  for (std::size_t i = 1; i < C.size(); ++i) {
    std::vector<long long> row(static_cast<std::size_t>(D));
    for (int j = 0; j < D; ++j) {
      double v = C[i][j] - C[0][j];
      if (v != std::round(v)) throw std::invalid_argument("scenery_coset_check: support is not integral");
      row[j] = static_cast<long long>(std::llround(v));
    }
    diff.push_back(row);
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(diff.size()), D);
  for (std::size_t i = 0; i < diff.size(); ++i)
    for (int j = 0; j < D; ++j) M(static_cast<Eigen::Index>(i), j) = static_cast<double>(diff[i][j]);
  r.affine_rank = static_cast<int>(M.fullPivLu().rank());
  if (r.affine_rank < D) return r;
  // Index of the lattice spanned by the rows = gcd of all D×D minors.
  BigInt g = 0;
  std::vector<int> pick(static_cast<std::size_t>(D));
  std::iota(pick.begin(), pick.end(), 0);
  const int m = static_cast<int>(diff.size());
  while (true) {
    IntMatrix sub(D);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) sub(a, b) = diff[static_cast<std::size_t>(pick[a])][b];
    g = gcd(g, BigInt(abs(det_int(sub))));
    int i = D - 1;
    while (i >= 0 && pick[i] == m - D + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < D; ++j) pick[j] = pick[j - 1] + 1;
  }
  r.lattice_index = g;
  return r;
}

ToralPoint nil_torus_factor(const NilPoint& p) {
  std::vector<double> v(p.rep.x);
  v.insert(v.end(), p.rep.y.begin(), p.rep.y.end());
  return frac_rep(v);
}

std::vector<ScenarioInfo> list_scenarios() {
  return {
      {"torus_sl2", "torus", 2, "T^2, hyperbolic pair [[2,1],[1,1]], [[1,1],[1,2]] and inverses; sawtooth displacement",
       true},
      {"qA_torus3", "torus", 3, "T^3, q(A1), q(A2) and inverses; sawtooth displacement", true},
      {"qA_single", "torus", 3, "T^3, q(A1) alone (non-ergodic reference); sawtooth displacement", true},
      {"heisenberg_H7", "nilmanifold", 6,
       "H7/D7, automorphisms tau_A1, tau_A2, inverses and a central translation; sawtooth of the torus factor", false},
      {"scenery_free_group", "scenery", 3, "free group F2 walking on an i.i.d. integral scenery in Z^3", false},
      {"motion_group", "motion", 4, "SU(2) x C^2 motion group with two rotations and unit translations", false},
      {"coin", "trivial", 1, "i.i.d. +-1 steps (oracle walk)", false},
  };
}

SystemSpec build_scenario(const std::string& name) {
  if (name == "torus_sl2") return scenario_torus_sl2();
  if (name == "qA_torus3") return scenario_qA_torus3();
  if (name == "qA_single") return scenario_qA_single();
  if (name == "heisenberg_H7") return scenario_heisenberg_H7();
  if (name == "scenery_free_group") return scenario_scenery_free_group();
  if (name == "motion_group") return scenario_motion_group();
  if (name == "coin") return scenario_coin();
  throw std::invalid_argument("unknown scenario: " + name);
}

std::optional<TorusModel> torus_model(const SystemSpec& spec) {
  if (auto* t = dynamic_cast<const TorusDynamics*>(spec.dynamics.get())) {
    return TorusModel{t->d(), t->matrices(), spec.weights, spec.displacement_kind == "sawtooth"};
  }
  if (auto* n = dynamic_cast<const NilDynamics*>(spec.dynamics.get())) {
    // The (x, y) factor evolves on its own under (Dx, ᵗD⁻¹y); central translations act trivially there.
    TorusModel m{2 * n->d(), {}, spec.weights, spec.displacement_kind == "sawtooth"};
    for (const auto& g : n->generators()) m.gens.push_back(IntMatrix::block_diag(g.D, inverse_transpose(g.D)));
    return m;
  }
  return std::nullopt;
}

}  // namespace gaplab
