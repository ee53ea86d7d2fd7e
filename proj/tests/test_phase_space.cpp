#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>

#include "gaplab/phase_space.hpp"
#include "gaplab/scenarios.hpp"

using namespace gaplab;

namespace {

double circle_dist(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

IntMatrix random_unimodular(CounterRng& rng) {
  const IntMatrix a = IntMatrix::from_rows({{2, 1}, {1, 1}});
  const IntMatrix b = IntMatrix::from_rows({{1, 1}, {1, 2}});
  const IntMatrix gens[4] = {a, inverse_unimodular(a), b, inverse_unimodular(b)};
  IntMatrix m = IntMatrix::identity(2);
  for (int i = 0, n = 1 + static_cast<int>(rng.below(4)); i < n; ++i) m = m * gens[rng.below(4)];
  return m;
}

}  // namespace

TEST_CASE("frac_rep examples and convention") {
  CHECK(frac_rep({0.0, 0.0}).coords == std::vector<double>{0.0, 0.0});
  CHECK(frac_rep({0.75}).coords[0] == -0.25);
  CHECK(frac_rep({-0.5}).coords[0] == -0.5);
  CHECK(frac_rep({0.5}).coords[0] == -0.5);
  CHECK_THROWS(frac_rep({NAN}));
  CounterRng rng(1, 2);
  for (int i = 0; i < 10000; ++i) {
    double v = (rng.uniform() - 0.5) * 100;
    double r = frac1(v);
    CHECK(r >= -0.5);
    CHECK(r < 0.5);
    CHECK(frac1(r) == r);
    CHECK(circle_dist(frac1(v + 7.0), r) <= 1e-12);
    CHECK(std::abs((v - r) - std::round(v - r)) <= 1e-9);
  }
}

TEST_CASE("torus_apply") {
  ToralPoint x{{0.25, 0.25}};
  CHECK(torus_apply(IntMatrix::identity(2), x) == x);
  // [[2,1],[1,1]]·(0.25, 0.25) = (0.75, 0.5) -> (−0.25, −0.5)
  CHECK(torus_apply(IntMatrix::from_rows({{2, 1}, {1, 1}}), x) == ToralPoint{{-0.25, -0.5}});
  CHECK_THROWS(torus_apply(IntMatrix::identity(3), x));
  CounterRng rng(3, 3);
  for (int t = 0; t < 1000; ++t) {
    IntMatrix M = random_unimodular(rng), N = random_unimodular(rng);
    ToralPoint p = frac_rep({rng.uniform(), rng.uniform()});
    ToralPoint lhs = torus_apply(M * N, p), rhs = torus_apply(M, torus_apply(N, p));
    for (int j = 0; j < 2; ++j) CHECK(circle_dist(lhs.coords[j], rhs.coords[j]) <= 1e-12);
  }
}

TEST_CASE("nil_reduce") {
  CHECK(nil_reduce(HeisenbergElement::neutral(1)).rep == HeisenbergElement::neutral(1));
  HeisenbergElement g{{1.5}, {-0.25}, 0.1};
  // δ = (m, n, k) = (−1, 1, k); oracle through the group law itself.
  HeisenbergElement h = heis_mul(heis_mul(g, HeisenbergElement{{-1}, {0}, 0}), HeisenbergElement{{0}, {1}, 0});
  h = heis_mul(h, HeisenbergElement{{0}, {0}, -std::floor(h.z)});
  NilPoint p = nil_reduce(g);
  CHECK(p.rep.x[0] == doctest::Approx(0.5));
  CHECK(p.rep.y[0] == doctest::Approx(0.75));
  CHECK(p.rep.z == doctest::Approx(h.z));
  CHECK(p.rep.z == doctest::Approx(0.35));
  CHECK(nil_reduce(p.rep) == p);

  CounterRng rng(5, 5);
  for (int t = 0; t < 5000; ++t) {
    HeisenbergElement r = HeisenbergElement::neutral(3);
    for (auto& v : r.x) v = (rng.uniform() - 0.5) * 20;
    for (auto& v : r.y) v = (rng.uniform() - 0.5) * 20;
    r.z = (rng.uniform() - 0.5) * 20;
    NilPoint q = nil_reduce(r);
    for (int i = 0; i < 3; ++i) {
      CHECK(q.rep.x[i] >= 0.0);
      CHECK(q.rep.x[i] < 1.0);
      CHECK(q.rep.y[i] >= 0.0);
      CHECK(q.rep.y[i] < 1.0);
    }
    CHECK(q.rep.z >= 0.0);
    CHECK(q.rep.z < 1.0);
    CHECK(nil_reduce(q.rep) == q);
    // r⁻¹·q must be integral.
    HeisenbergElement delta = heis_mul(heis_inv(r), q.rep);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(delta.x[i] - std::round(delta.x[i])) <= 1e-9);
      CHECK(std::abs(delta.y[i] - std::round(delta.y[i])) <= 1e-9);
    }
    CHECK(std::abs(delta.z - std::round(delta.z)) <= 1e-8);
  }
}

TEST_CASE("nil_apply") {
  CounterRng rng(6, 6);
  NilPoint p = nil_reduce(HeisenbergElement{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, 0.7});
  CHECK(nil_apply(HeisenbergElement::neutral(3), IntMatrix::identity(3), p) == p);
  HeisenbergElement central = HeisenbergElement::neutral(3);
  central.z = 0.45;
  NilPoint c = nil_apply(central, IntMatrix::identity(3), p);
  CHECK(c.rep.x == p.rep.x);
  CHECK(c.rep.y == p.rep.y);
  CHECK(circle_dist(c.rep.z, std::fmod(p.rep.z + 0.45, 1.0)) <= 1e-12);

  const IntMatrix D = q_of(IntMatrix::from_rows({{2, 1}, {1, 1}}));
  const IntMatrix block = IntMatrix::block_diag(D, inverse_transpose(D));
  NilAffine fast(HeisenbergElement::neutral(3), D);
  for (int t = 0; t < 1000; ++t) {
    HeisenbergElement r = HeisenbergElement::neutral(3);
    for (auto& v : r.x) v = rng.uniform();
    for (auto& v : r.y) v = rng.uniform();
    r.z = rng.uniform();
    NilPoint q{r};
    NilPoint img = nil_apply(HeisenbergElement::neutral(3), D, q);
    ToralPoint lhs = nil_torus_factor(img);
    ToralPoint rhs = torus_apply(block, nil_torus_factor(q));
    for (int j = 0; j < 6; ++j) CHECK(circle_dist(lhs.coords[j], rhs.coords[j]) <= 1e-12);
    HeisenbergElement f = r;
    fast.apply_inplace(f);
    CHECK(circle_dist(f.z, img.rep.z) <= 1e-12);
  }
}

TEST_CASE("scenery_lookup") {
  auto C = default_scenery_support();
  SceneryLaw law(C, std::vector<double>(C.size(), 1.0 / C.size()));
  SceneryPoint s = SceneryPoint::make(1234);
  FreeWord w{{1, -2, 1}};
  CHECK(scenery_lookup(law, s, w) == scenery_lookup(law, s, w));
  // Incremental fingerprints agree with recomputation.
  SceneryPoint walker = SceneryPoint::make(1234);
  for (int l : w.letters) walker.move(l);
  CHECK(walker.current_fingerprint() == word_fingerprint(1234, w));
  CHECK(&scenery_current(law, walker) == &scenery_lookup(law, s, w));
  walker.move(-1);
  CHECK(walker.word == FreeWord{{1, -2}});

  SceneryPoint cached = SceneryPoint::make(1234, true);
  std::map<std::size_t, int> counts;
  std::vector<double> mean(3, 0.0), sq(3, 0.0);
  const int N = 100000;
  CounterRng rng(7, 7);
  for (int i = 0; i < N; ++i) {
    // Distinct words: a length-20 word encodes i.
    FreeWord u;
    for (int b = 0; b < 20; ++b) u.letters.push_back(((i >> b) & 1) ? 1 : 2);
    const auto& v = scenery_lookup(law, s, u);
    CHECK(&v == &scenery_lookup(law, cached, u));
    ++counts[static_cast<std::size_t>(&v - law.support.data())];
    for (int j = 0; j < 3; ++j) {
      mean[j] += v[j];
      sq[j] += v[j] * v[j];
    }
  }
  double tv = 0.0;
  for (std::size_t k = 0; k < C.size(); ++k) tv += std::abs(counts[k] / double(N) - 1.0 / C.size());
  CHECK(0.5 * tv <= 0.01);
  for (int j = 0; j < 3; ++j) {
    double m = mean[j] / N, sd = std::sqrt(sq[j] / N - m * m);
    CHECK(std::abs(m) <= 4 * sd / std::sqrt(double(N)));
  }
}

TEST_CASE("motion_apply") {
  CounterRng rng(8, 8);
  MotionState s{haar_unitary(2, rng), Eigen::VectorXcd::Zero(2)};
  UnitaryMatrix I{Eigen::MatrixXcd::Identity(2, 2)};
  MotionState t = motion_apply(I, Eigen::VectorXcd::Zero(2), s);
  CHECK((t.x.m - s.x.m).norm() == 0.0);
  CHECK(t.v.norm() == 0.0);
  auto rots = default_motion_rotations();
  Eigen::VectorXcd tau = Eigen::VectorXcd::Zero(2);
  tau(0) = 1.0;
  for (int i = 0; i < 10000; ++i) {
    Eigen::VectorXcd before = s.v;
    motion_apply_inplace(rots[i % 2], tau, s);
    CHECK((s.v - before).norm() <= tau.norm() + 1e-12);
  }
  CHECK(s.x.unitarity_error() <= 1e-10);
  // Haar barycenter of x*τ is 0.
  const int N = 100000;
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(2);
  double out[4];
  for (int i = 0; i < N; ++i) {
    motion_displacement(haar_unitary(2, rng), tau, out);
    mean += Eigen::Vector2cd(std::complex<double>(out[0], out[1]), std::complex<double>(out[2], out[3]));
  }
  CHECK((mean / N).norm() <= 4 * tau.norm() / std::sqrt(double(N)));
  CHECK_THROWS(motion_apply(I, Eigen::VectorXcd::Zero(3), s));
}
