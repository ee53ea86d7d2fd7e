#include "doctest.h"

#include <cmath>

#include "gaplab/scenarios.hpp"
#include "gaplab/spectral.hpp"

using namespace gaplab;

TEST_CASE("catalogue") {
  auto infos = list_scenarios();
  REQUIRE(infos.size() == 7);
  for (const auto& info : infos) {
    SystemSpec s = build_scenario(info.name);
    CHECK(s.name == info.name);
    CHECK(s.D == info.D);
    CHECK(s.dynamics->space() == info.space);
    CHECK(info.fourier_supported == (s.displacement_kind == "sawtooth" && info.space == "torus"));
  }
  CHECK_THROWS_AS(build_scenario("nope"), std::invalid_argument);
}

TEST_CASE("generator sets are symmetric") {
  for (const auto& info : list_scenarios()) {
    SystemSpec s = build_scenario(info.name);
    if (info.name == "qA_single") {
      CHECK(s.inverse == std::vector<int>{-1});
      continue;
    }
    REQUIRE(s.inverse.size() == s.num_letters());
    for (std::size_t a = 0; a < s.num_letters(); ++a) {
      int b = s.inverse[a];
      REQUIRE(b >= 0);
      CHECK(s.inverse[static_cast<std::size_t>(b)] == static_cast<int>(a));
      CHECK(s.weights[static_cast<std::size_t>(b)] == s.weights[a]);
    }
  }
  auto t = torus_model(scenario_torus_sl2());
  for (std::size_t a = 0; a < t->gens.size(); a += 2) CHECK(t->gens[a + 1] == inverse_unimodular(t->gens[a]));
  SystemSpec m = scenario_motion_group();
  auto* md = dynamic_cast<const MotionDynamics*>(m.dynamics.get());
  REQUIRE(md);
  for (std::size_t a = 0; a < m.num_letters(); ++a) {
    const auto& r = md->rotations()[a].m;
    CHECK((r * md->rotations()[static_cast<std::size_t>(m.inverse[a])].m - Eigen::MatrixXcd::Identity(2, 2)).norm() <=
          1e-15);
    CHECK(r.determinant().real() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("torus and nilmanifold generators are unimodular") {
  for (const char* name : {"torus_sl2", "qA_torus3", "qA_single", "heisenberg_H7"}) {
    auto m = torus_model(build_scenario(name));
    REQUIRE(m.has_value());
    for (const auto& g : m->gens) CHECK(det_int(g) == 1);
  }
  SystemSpec h = scenario_heisenberg_H7();
  auto* nd = dynamic_cast<const NilDynamics*>(h.dynamics.get());
  REQUIRE(nd);
  for (const auto& g : nd->generators()) CHECK(is_unimodular(g.D));
  CHECK_FALSE(torus_model(scenario_coin()).has_value());
}

TEST_CASE("displacements are centered") {
  for (const char* name : {"torus_sl2", "qA_torus3", "heisenberg_H7", "scenery_free_group", "motion_group", "coin"}) {
    CenteringResult r = check_centering(build_scenario(name), 20000, 9);
    CHECK_MESSAGE(!r.flagged, name);
  }
  auto C = default_scenery_support();
  std::vector<double> skew(C.size(), 1.0 / C.size());
  skew[0] += 0.05;
  skew[1] -= 0.05;
  CHECK_THROWS(scenario_scenery_free_group(2, C, skew, 3));
}

TEST_CASE("scenery displacement is the scenery value at the current word") {
  SystemSpec s = scenario_scenery_free_group();
  auto* dyn = dynamic_cast<const SceneryDynamics*>(s.dynamics.get());
  REQUIRE(dyn);
  State x = sample_base(s, 5, 0);
  double out[3];
  for (std::size_t a : {0u, 2u, 1u, 3u, 3u}) {
    s.displacement(a, x, out);
    const auto& v = scenery_current(dyn->law(), std::get<SceneryPoint>(x));
    for (int j = 0; j < 3; ++j) CHECK(out[j] == v[j]);
    bool in_support = false;
    for (const auto& c : dyn->law().support) in_support = in_support || c == std::vector<double>(v.begin(), v.end());
    CHECK(in_support);
    dyn->act(a, x);
  }
  CHECK(SceneryDynamics::signed_generator(0) == 1);
  CHECK(SceneryDynamics::signed_generator(3) == -2);
}

TEST_CASE("scenery coset check") {
  CosetCheck full = scenery_coset_check(default_scenery_support());
  CHECK(full.affine_rank == 3);
  CHECK(full.spanning());
  // ±e_i alone: every difference has even coordinate sum.
  CosetCheck half = scenery_coset_check({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
  CHECK(half.affine_rank == 3);
  CHECK(half.lattice_index == 2);
  CosetCheck flat = scenery_coset_check({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}});
  CHECK(flat.affine_rank == 2);
  CHECK(flat.lattice_index == 0);
}

TEST_CASE("motion group fixed points") {
  auto rots = default_motion_rotations();
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2), e2 = Eigen::VectorXcd::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  FixedPointCheck none = motion_fixed_point(rots, {e1, e2});
  CHECK_FALSE(none.has_fixed_point);
  CHECK(none.residual > 1e-3);
  CHECK_FALSE(motion_fixed_point_affine(rots, {e1, e2}).has_fixed_point);

  // Translations built around v0 make the system a_i(v + τ_i) = v consistent.
  Eigen::VectorXcd v0(2);
  v0 << std::complex<double>(0.3, -1.0), std::complex<double>(2.0, 0.5);
  std::vector<Eigen::VectorXcd> taus;
  for (const auto& r : rots) taus.push_back(r.m.adjoint() * v0 - v0);
  FixedPointCheck fp = motion_fixed_point(rots, taus);
  CHECK(fp.has_fixed_point);
  CHECK((fp.v - v0).norm() <= 1e-10);
  CHECK_THROWS(scenario_motion_group(2, rots, taus));
  for (const auto& r : rots) CHECK(r.unitarity_error() <= 1e-15);
}

TEST_CASE("Heisenberg scenario projects to its torus factor") {
  SystemSpec s = scenario_heisenberg_H7();
  auto m = torus_model(s);
  REQUIRE(m.has_value());
  CHECK(m->d == 6);
  CounterRng rng(2, 2);
  State x = sample_base(s, 3, 0);
  for (int t = 0; t < 500; ++t) {
    std::size_t a = rng.below(s.num_letters());
    ToralPoint before = nil_torus_factor(std::get<NilPoint>(x));
    s.dynamics->act(a, x);
    ToralPoint after = nil_torus_factor(std::get<NilPoint>(x));
    ToralPoint expect = torus_apply(m->gens[a], before);
    for (int j = 0; j < 6; ++j) {
      double d = std::abs(after.coords[j] - expect.coords[j]);
      CHECK(std::min(d, 1.0 - d) <= 1e-9);
    }
  }
}

TEST_CASE("q(A) fixed vectors and dual orbits") {
  IntMatrix A = IntMatrix::from_rows({{2, 1}, {1, 1}}), B = IntMatrix::from_rows({{1, 2}, {1, 3}});
  for (const IntMatrix& M : {A, B}) {
    IntMatrix q = q_of(M);
    CHECK(q.apply(q_fixed_vector(M)) == q_fixed_vector(M));
    CHECK(q.transpose().apply(q_dual_fixed_vector(M)) == q_dual_fixed_vector(M));
  }
  // Every nonzero frequency with ‖p‖ ≤ 5 has a long orbit under the qA_torus3 generators.
  auto m = torus_model(scenario_qA_torus3());
  std::vector<IntMatrix> dual;
  for (const auto& g : m->gens) dual.push_back(g.transpose());
  FrequencyBall ball(3, 5.0);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const int* p = ball.point(i);
    CHECK(group_orbit_size(dual, int_vector({p[0], p[1], p[2]}), 50) >= 50);
  }
}
