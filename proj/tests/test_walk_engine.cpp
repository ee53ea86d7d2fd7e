#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaplab/group_algebra.hpp"
#include "gaplab/scenarios.hpp"
#include "gaplab/walk_engine.hpp"

using namespace gaplab;

namespace {

SystemSpec zero_displacement(const SystemSpec& s) {
  return with_displacement(
      s, [D = s.D](std::size_t, const State&, double* out) { std::fill(out, out + D, 0.0); }, 0.0);
}

// Torus translations x -> x + t_a form an abelian action; d(x) = sin(2πx_0) gives a coboundary.
class Translations : public Dynamics {
 public:
  std::vector<std::vector<double>> t;
  std::string space() const override { return "torus"; }
  std::size_t num_letters() const override { return t.size(); }
  void act(std::size_t a, State& x) const override {
    auto& c = std::get<ToralPoint>(x).coords;
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = frac1(c[j] + t[a][j]);
  }
  State sample_base(CounterRng& rng) const override { return frac_rep({rng.uniform(), rng.uniform()}); }
};

double potential(const State& x) {
  const auto& c = std::get<ToralPoint>(x).coords;
  return std::sin(2 * std::numbers::pi * c[0]) + std::cos(2 * std::numbers::pi * c[1]);
}

SystemSpec coboundary_spec(std::shared_ptr<const Dynamics> dyn) {
  SystemSpec s;
  s.name = "coboundary";
  s.weights.assign(dyn->num_letters(), 1.0 / dyn->num_letters());
  s.D = 1;
  s.bound = 4.0;
  s.dynamics = dyn;
  s.displacement = [dyn](std::size_t a, const State& x, double* out) {
    State y = x;
    dyn->act(a, y);
    out[0] = potential(y) - potential(x);
  };
  s.finalize();
  return s;
}

}  // namespace

TEST_CASE("SystemSpec invariants") {
  SystemSpec s = scenario_torus_sl2();
  s.weights = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS(s.finalize());
  SystemSpec t = scenario_torus_sl2();
  t.weights = {0.25, 0.25, 0.5};
  CHECK_THROWS(t.finalize());
}

TEST_CASE("step") {
  SystemSpec single = scenario_qA_single();
  CounterRng rng(1, 1);
  State x = sample_base(single, 1, 0);
  for (int i = 0; i < 100; ++i) CHECK(step(single, x, rng).letter == 0);

  SystemSpec s = scenario_torus_sl2();
  std::vector<int> counts(4, 0);
  const int N = 1000000;
  State y = sample_base(s, 2, 0);
  for (int i = 0; i < N; ++i) {
    StepResult r = step(s, y, rng);
    ++counts[r.letter];
    for (double v : r.increment) REQUIRE(std::abs(v) <= s.bound);
  }
  for (int c : counts) CHECK(std::abs(c - N / 4.0) <= 4 * std::sqrt(N * 0.25 * 0.75));
}

TEST_CASE("run: determinism, telescoping, zero displacement") {
  SystemSpec s = scenario_torus_sl2();
  Trajectory a = run(s, 500, 77, 1), b = run(s, 500, 77, 1);
  CHECK(a.letters == b.letters);
  CHECK(a.sums == b.sums);
  std::ostringstream ca, cb;
  write_trajectory_csv(ca, a);
  write_trajectory_csv(cb, b);
  CHECK(ca.str() == cb.str());
  CHECK(ca.str().find('\r') == std::string::npos);
  // thinning = 1 keeps every state: S_k = S_{k−1} + c(a_k, x_{k−1}) exactly.
  REQUIRE(a.states.size() == 501);
  std::vector<double> inc(2);
  for (std::int64_t k = 1; k <= a.n(); ++k) {
    s.displacement(a.letters[k - 1], a.states[k - 1].second, inc.data());
    for (int j = 0; j < 2; ++j) {
      double prev = k == 1 ? 0.0 : a.S(k - 1)[j];
      CHECK(a.S(k)[j] == prev + inc[j]);
    }
    CHECK(a.states[k].first == k);
  }
  CHECK(cocycle_sum(s, a.letters, a.states[0].second) == std::vector<double>(a.S(a.n()), a.S(a.n()) + 2));
  Trajectory thin = run(s, 500, 77, 0);
  CHECK(thin.states.size() == 2);
  CHECK(thin.sums == a.sums);
  Trajectory z = run(zero_displacement(s), 100, 3);
  for (double v : z.sums) CHECK(v == 0.0);
  CHECK_THROWS(run(s, 0, 1));
  for (std::int64_t k = 1; k <= a.n(); ++k)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(a.S(k)[j]) <= k * s.bound);
}

TEST_CASE("cocycle_sum concatenation identity") {
  SystemSpec s = scenario_scenery_free_group();
  CounterRng rng(4, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> u, v;
    for (int i = 0, n = static_cast<int>(rng.below(30)); i < n; ++i) u.push_back(rng.below(4));
    for (int i = 0, n = static_cast<int>(rng.below(30)); i < n; ++i) v.push_back(rng.below(4));
    State x = sample_base(s, 9, static_cast<std::uint64_t>(t));
    std::vector<std::size_t> uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    auto lhs = cocycle_sum(s, uv, x);
    auto a = cocycle_sum(s, v, act_word(s, u, x));
    auto b = cocycle_sum(s, u, x);
    for (int j = 0; j < 3; ++j) CHECK(lhs[j] == a[j] + b[j]);
  }
  CHECK(cocycle_sum(s, {}, sample_base(s, 1, 1)) == std::vector<double>(3, 0.0));
}

TEST_CASE("coboundary sums depend only on the product") {
  auto dyn = std::make_shared<Translations>();
  dyn->t = {{0.1, 0.3}, {std::sqrt(2.0) - 1, 0.05}, {0.7, std::numbers::pi - 3}};
  SystemSpec s = coboundary_spec(dyn);
  CounterRng rng(5, 5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::size_t> w;
    for (int i = 0, n = 1 + static_cast<int>(rng.below(20)); i < n; ++i) w.push_back(rng.below(3));
    std::vector<std::size_t> perm = w;
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    State x = sample_base(s, 3, static_cast<std::uint64_t>(t));
    double telescoped = potential(act_word(s, w, x)) - potential(x);
    CHECK(std::abs(cocycle_sum(s, w, x)[0] - cocycle_sum(s, perm, x)[0]) <= 1e-12);
    CHECK(std::abs(cocycle_sum(s, w, x)[0] - telescoped) <= 1e-12);
  }
}

TEST_CASE("check_centering") {
  SystemSpec zero = zero_displacement(scenario_torus_sl2());
  auto z = check_centering(zero, 1000, 1);
  CHECK(z.estimate == std::vector<double>(2, 0.0));
  CHECK_FALSE(z.flagged);
  for (auto s : {scenario_torus_sl2(), scenario_motion_group(), scenario_qA_torus3(), scenario_heisenberg_H7()}) {
    auto r = check_centering(s, 100000, 2);
    for (std::size_t j = 0; j < r.estimate.size(); ++j) CHECK(std::abs(r.estimate[j]) <= 4 * r.stderr_[j]);
    CHECK_FALSE(r.flagged);
  }
  SystemSpec shifted = with_mean_subtracted(scenario_torus_sl2(), {0.1, 0.0});
  auto f = check_centering(shifted, 10000, 3);
  CHECK(f.flagged);
}

TEST_CASE("birkhoff averages") {
  SystemSpec s = scenario_qA_torus3();
  Observable one = [](const State&) { return 1.0; };
  CHECK(birkhoff_average(s, one, 100, 1) == 1.0);
  const std::int64_t n = 200000;
  Observable chi = [](const State& x) {
    const auto& c = std::get<ToralPoint>(x).coords;
    return std::cos(2 * std::numbers::pi * (c[0] + 2 * c[1] - c[2]));
  };
  CHECK(std::abs(birkhoff_average(s, chi, n, 5)) <= 5 / std::sqrt(double(n)));
  // Brute-force an integral frequency fixed by ᵗq(A1); its character is invariant along the walk.
  SystemSpec single = scenario_qA_single();
  auto model = torus_model(single);
  const IntMatrix& M = model->gens[0];
  std::vector<long long> p;
  for (int a = -3; a <= 3 && p.empty(); ++a)
    for (int b = -3; b <= 3 && p.empty(); ++b)
      for (int c = -3; c <= 3 && p.empty(); ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        IntVector v = M.transpose().apply(int_vector({a, b, c}));
        if (v == int_vector({a, b, c})) p = {a, b, c};
      }
  REQUIRE(p.size() == 3);
  Observable inv = [p](const State& x) {
    const auto& c = std::get<ToralPoint>(x).coords;
    return std::cos(2 * std::numbers::pi * (p[0] * c[0] + p[1] * c[1] + p[2] * c[2]));
  };
  double pp = double(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  State x0 = frac_rep({0.1 * p[0] / pp, 0.1 * p[1] / pp, 0.1 * p[2] / pp});
  double avg = birkhoff_average(single, inv, n, 5, &x0);
  CHECK(std::abs(avg - inv(x0)) <= 1e-9);
  CHECK(std::abs(avg) > 0.5);
}
