#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gaplab/scenarios.hpp"
#include "gaplab/statistics.hpp"

using namespace gaplab;

namespace {

SystemSpec zero_walk(const SystemSpec& s) {
  return with_displacement(
      s, [D = s.D](std::size_t, const State&, double* out) { std::fill(out, out + D, 0.0); }, 0.0);
}

double log_binom_pmf(std::int64_t t, std::int64_t k) {
  return std::lgamma(double(t) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(t - k) + 1) -
         double(t) * std::log(2.0);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("empirical covariance") {
  Eigen::MatrixXd c = empirical_covariance(std::vector<std::vector<double>>{{1, 0}, {-1, 0}});
  CHECK(c(0, 0) == 1.0);
  CHECK(c(0, 1) == 0.0);
  CHECK(c(1, 1) == 0.0);
  CHECK(empirical_covariance(std::vector<std::vector<double>>{{2, 3}, {2, 3}, {2, 3}}).norm() == 0.0);
  CHECK_THROWS(empirical_covariance(std::vector<std::vector<double>>{{1.0}}));

  CounterRng rng(1, 1);
  Eigen::MatrixXd rows(300, 3);
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = 0; j < 3; ++j) rows(i, j) = rng.normal() + double(j);
  Eigen::Vector3d mean = rows.colwise().mean();
  Eigen::Matrix3d ref = Eigen::Matrix3d::Zero();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::Vector3d v = rows.row(i).transpose() - mean;
    ref += v * v.transpose();
  }
  ref /= double(rows.rows());
  Eigen::MatrixXd got = empirical_covariance(rows);
  CHECK((got - ref).norm() <= 1e-12);
  CHECK((got - got.transpose()).norm() == 0.0);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(got).eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("distribution helpers") {
  for (double x : {-3.0, -0.5, 0.0, 1.2, 4.0}) CHECK(std::abs(normal_cdf(x) - 0.5 * std::erfc(-x / std::sqrt(2.0))) <= 1e-15);
  CHECK(ks_normal({0.0}) == doctest::Approx(0.5));
  std::vector<double> a{0.3, -1.0, 2.0, 0.1};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample({0.0, 1.0}, {5.0, 6.0}) == 1.0);
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.0) == 1.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 1.0) == 4.0);
}

TEST_CASE("gaussian_box_mass") {
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  CHECK(std::abs(gaussian_box_mass(one, Box{{-1.96}, {1.96}}, 1.0) - 0.9500) <= 1e-4);
  CHECK(std::abs(gaussian_box_mass(one, Box{{-1.96}, {1.96}}, 1.0) - std::erf(1.96 / std::sqrt(2.0))) <= 1e-12);
  Eigen::MatrixXd s(2, 2);
  s << 2.0, 0.7, 0.7, 1.0;
  CHECK(std::abs(gaussian_box_mass(s, Box{{-inf, -inf}, {inf, inf}}, 3.0) - 1.0) <= 1e-12);
  Box b{{-0.5, -2.0}, {1.5, 0.3}}, nb{{-1.5, -0.3}, {0.5, 2.0}};
  CHECK(std::abs(gaussian_box_mass(s, b, 1.0) - gaussian_box_mass(s, nb, 1.0)) <= 1e-12);

  // Oracle: nested adaptive quadrature of the bivariate density.
  using boost::math::quadrature::gauss_kronrod;
  Eigen::Matrix2d P = s.inverse();
  const double c = 1.0 / (2 * std::numbers::pi * std::sqrt(s.determinant()));
  double ref = gauss_kronrod<double, 31>::integrate(
      [&](double x) {
        return gauss_kronrod<double, 31>::integrate(
            [&](double y) { return c * std::exp(-0.5 * (P(0, 0) * x * x + 2 * P(0, 1) * x * y + P(1, 1) * y * y)); },
            b.lo[1], b.hi[1], 10, 1e-14);
      },
      b.lo[0], b.hi[0], 10, 1e-14);
  CHECK(std::abs(gaussian_box_mass(s, b, 1.0) - ref) <= 1e-8);

  // (2πn)^{D/2}(det Σ)^{1/2} · mass → volume for a fixed box.
  Box unit = Box::cube(2, 0.5);
  double prev = 1.0;
  for (double n : {10.0, 100.0, 1e4, 1e6}) {
    double err = std::abs(2 * std::numbers::pi * n * std::sqrt(s.determinant()) * gaussian_box_mass(s, unit, n) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-5);
  Eigen::MatrixXd deg = Eigen::MatrixXd::Zero(2, 2);
  deg(0, 0) = 1.0;
  CHECK_THROWS(gaussian_box_mass(deg, unit, 1.0));
}

TEST_CASE("coin CLT") {
  SystemSpec coin = scenario_coin();
  Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  const std::int64_t n = 1024;
  const std::size_t paths = 4000;
  CltReport r = clt_test(coin, n, paths, one, 21);
  CHECK(r.directions.size() == 4);
  for (double k : r.ks) CHECK(k <= 1.63 / std::sqrt(double(paths)) + 0.8 / std::sqrt(double(n)));
  CHECK(r.frobenius_rel_error <= 4 * std::sqrt(2.0 / paths));
  CHECK(clt_test(coin, n, 200, one, 21).covariance == clt_test(coin, n, 200, one, 21).covariance);
  Eigen::MatrixXd deg = Eigen::MatrixXd::Zero(1, 1);
  CHECK_THROWS(clt_test(coin, n, 100, deg, 1));

  // Covariance error against the exact value 1, median over 5 master seeds.
  std::vector<double> small, large;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    small.push_back(clt_test(coin, 64, 2000, one, 100 + seed).frobenius_rel_error);
    large.push_back(clt_test(coin, 64, 8000, one, 200 + seed).frobenius_rel_error);
  }
  CHECK(median(large) / median(small) <= 0.7);
}

TEST_CASE("clt directions") {
  auto d = clt_directions(3);
  REQUIRE(d.size() == 6);
  CHECK(d[0] == std::vector<double>{1, 0, 0});
  CHECK(clt_directions(3) == d);
  for (const auto& v : d) {
    double s = 0.0;
    for (double x : v) s += x * x;
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("recurrence and transience profiles") {
  SystemSpec zero = zero_walk(scenario_torus_sl2());
  RecurrenceReport z = recurrence_profile(zero, {10, 100}, 20, 1);
  CHECK(z.minima.norm() == 0.0);
  TransienceReport zt = transience_profile(zero, 256, 20, 1.0, 1);
  for (double f : zt.fraction_within) CHECK(f == 1.0);

  SystemSpec coin = scenario_coin();
  RecurrenceReport r = recurrence_profile(coin, {10, 100, 1000, 10000}, 400, 2);
  for (Eigen::Index p = 0; p < r.minima.rows(); ++p)
    for (Eigen::Index j = 1; j < r.minima.cols(); ++j) CHECK(r.minima(p, j) <= r.minima(p, j - 1));
  // The lattice walk hits 0 early on most paths, so compare the upper decile.
  CHECK(r.q90.back() < r.q90.front());
  for (std::size_t j = 0; j < r.median.size(); ++j) CHECK(r.q10[j] <= r.median[j]);

  TransienceReport t = transience_profile(coin, 4096, 2000, 5.0, 3);
  CHECK(t.times.back() == 4096);
  CHECK(t.exponent >= 0.4);
  CHECK(t.exponent <= 0.6);
  for (double f : t.fraction_within) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  // P(|S_4096| ≤ 5) for the coin, from the binomial law.
  double exact = 0.0;
  for (std::int64_t k = 2048 - 2; k <= 2048 + 2; ++k) exact += std::exp(log_binom_pmf(4096, k));
  CHECK(std::abs(t.fraction_within.back() - exact) <= 4 * std::sqrt(exact * (1 - exact) / 2000));
}

TEST_CASE("coin local limit") {
  SystemSpec coin = scenario_coin();
  Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  // [−4, 4) holds four points of either parity.
  Box box{{-4.0}, {4.0}};
  const std::int64_t n = 4096;
  LltReport r = llt_estimate(coin, one, box, {n}, 4000, 5);
  REQUIRE(r.windows.front() == 256);
  CHECK(r.samples_per_time >= 1000000);
  double oracle = 0.0;
  for (std::int64_t t = n; t < n + 256; ++t) {
    double p = 0.0;
    for (std::int64_t k = 0; k <= t; ++k) {
      std::int64_t s = 2 * k - t;
      if (s >= -4 && s < 4) p += std::exp(log_binom_pmf(t, k));
    }
    oracle += p * std::sqrt(2 * std::numbers::pi * double(t)) / 256.0;
  }
  CHECK(std::abs(oracle - 8.0) / 8.0 <= 0.01);
  CHECK(std::abs(coin_box_probability(n, -4, 4) * std::sqrt(2 * std::numbers::pi * n) - 8.0) <= 0.08);
  CHECK(r.rel_error.front() <= 0.1);
  CHECK(std::abs(r.normalized.front() - oracle) / oracle <= 0.1);
  CHECK(r.normalized.front() >= 0.0);
  CHECK(r.hit_fraction.front() <= 1.0);
  LltReport again = llt_estimate(coin, one, box, {n}, 4000, 5);
  CHECK(again.normalized == r.normalized);
}
