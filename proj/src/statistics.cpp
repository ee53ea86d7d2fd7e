// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "gaplab/parallel.hpp"
#include "gaplab/rng.hpp"

namespace gaplab {

Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 2) throw std::invalid_argument("empirical_covariance: need at least 2 samples");
  Eigen::RowVectorXd mean = rows.colwise().mean();
  Eigen::MatrixXd c = rows.rowwise() - mean;
  Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(rows.rows());
  return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd empirical_covariance(const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("empirical_covariance: need at least 2 samples");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(samples.front().size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != samples.front().size()) throw std::invalid_argument("empirical_covariance: ragged samples");
    for (std::size_t j = 0; j < samples[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = samples[i][j];
  }
  return empirical_covariance(m);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_normal(std::vector<double> z) {
  if (z.empty()) throw std::invalid_argument("ks_normal: empty sample");
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Eigen::MatrixXd sample_endpoints(const SystemSpec& spec, std::int64_t n, std::size_t paths, std::uint64_t seed) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(paths), spec.D);
  parallel_for(paths, [&](std::size_t p) {
    std::vector<double> last;
    walk_path(spec, seed, p, n, [&](std::int64_t k, std::size_t, const State&, const std::vector<double>& S) {
      if (k == n) last = S;
    });
    for (int j = 0; j < spec.D; ++j) out(static_cast<Eigen::Index>(p), j) = last[static_cast<std::size_t>(j)];
  });
  return out;
}

std::vector<std::vector<double>> clt_directions(int D) {
  std::vector<std::vector<double>> dirs;
  for (int j = 0; j < D; ++j) {
    std::vector<double> e(static_cast<std::size_t>(D), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    dirs.push_back(e);
  }
  CounterRng rng(0xC17D1235ULL, static_cast<std::uint64_t>(D), Domain::aux);
  for (int r = 0; r < 3; ++r) {
    std::vector<double> u(static_cast<std::size_t>(D));
    double nrm = 0.0;
    for (double& v : u) {
      v = rng.normal();
      nrm += v * v;
    }
    for (double& v : u) v /= std::sqrt(nrm);
    dirs.push_back(u);
  }
  return dirs;
}

CltReport clt_from_endpoints(const Eigen::MatrixXd& endpoints, std::int64_t n, const Eigen::MatrixXd& sigma_ref) {
  const auto D = sigma_ref.rows();
  if (endpoints.cols() != D) throw std::invalid_argument("clt_test: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_ref);
  if (es.eigenvalues()(0) <= 1e-12 * std::max(1.0, sigma_ref.trace()))
    throw std::invalid_argument("clt_test: reference covariance is degenerate");
  CltReport r;
  r.n = n;
  r.paths = static_cast<std::size_t>(endpoints.rows());
  r.sigma_ref = sigma_ref;
  const double sqn = std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd scaled = endpoints / sqn;
  r.covariance = empirical_covariance(scaled);
  r.frobenius_rel_error = (r.covariance - sigma_ref).norm() / sigma_ref.norm();
  r.directions = clt_directions(static_cast<int>(D));
  for (const auto& dir : r.directions) {
    Eigen::Map<const Eigen::VectorXd> u(dir.data(), D);
    const double sd = std::sqrt(u.dot(sigma_ref * u));
    std::vector<double> z(r.paths);
    for (std::size_t p = 0; p < r.paths; ++p) z[p] = scaled.row(static_cast<Eigen::Index>(p)).dot(u) / sd;
    r.ks.push_back(ks_normal(std::move(z)));
  }
  r.ks_max = *std::max_element(r.ks.begin(), r.ks.end());
  return r;
}

CltReport clt_test(const SystemSpec& spec, std::int64_t n, std::size_t paths, const Eigen::MatrixXd& sigma_ref,
                   std::uint64_t seed) {
  if (sigma_ref.rows() != spec.D) throw std::invalid_argument("clt_test: reference covariance has wrong size");
  return clt_from_endpoints(sample_endpoints(spec, n, paths, seed), n, sigma_ref);
}

RecurrenceReport recurrence_profile(const SystemSpec& spec, const std::vector<std::int64_t>& horizons,
                                    std::size_t paths, std::uint64_t seed) {
  if (horizons.empty() || !std::is_sorted(horizons.begin(), horizons.end()) || horizons.front() < 1)
    throw std::invalid_argument("recurrence_profile: horizons must be positive and increasing");
  RecurrenceReport r;
  r.horizons = horizons;
  const auto H = static_cast<Eigen::Index>(horizons.size());
  r.minima.resize(static_cast<Eigen::Index>(paths), H);
  parallel_for(paths, [&](std::size_t p) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t next = 0;
    walk_path(spec, seed, p, horizons.back(), [&](std::int64_t k, std::size_t, const State&, const std::vector<double>& S) {
      double s2 = 0.0;
      for (double v : S) s2 += v * v;
      best = std::min(best, s2);
      while (next < horizons.size() && horizons[next] == k)
        r.minima(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(next++)) = std::sqrt(best);
    });
  });
  for (Eigen::Index j = 0; j < H; ++j) {
    std::vector<double> col(r.minima.col(j).data(), r.minima.col(j).data() + r.minima.rows());
    r.median.push_back(quantile(col, 0.5));
    r.q10.push_back(quantile(col, 0.1));
    r.q90.push_back(quantile(col, 0.9));
  }
  return r;
}

TransienceReport transience_profile(const SystemSpec& spec, std::int64_t n, std::size_t paths, double radius,
                                    std::uint64_t seed, std::int64_t fit_from) {
  if (n < 1 || paths < 1) throw std::invalid_argument("transience_profile: n and paths must be positive");
  TransienceReport r;
  r.radius = radius;
  r.fit_from = fit_from;
  for (std::int64_t t = 1; t < n; t *= 2) r.times.push_back(t);
  r.times.push_back(n);
  const std::size_t T = r.times.size();
  auto norms = parallel_map<std::vector<double>>(paths, [&](std::size_t p) {
    std::vector<double> out(T);
    std::size_t next = 0;
    walk_path(spec, seed, p, n, [&](std::int64_t k, std::size_t, const State&, const std::vector<double>& S) {
      if (next < T && r.times[next] == k) {
        double s2 = 0.0;
        for (double v : S) s2 += v * v;
        out[next++] = std::sqrt(s2);
      }
    });
    return out;
  });
  r.fraction_within.assign(T, 0.0);
  r.mean_norm.assign(T, 0.0);
  for (const auto& row : norms)
    for (std::size_t i = 0; i < T; ++i) {
      r.fraction_within[i] += row[i] <= radius ? 1.0 : 0.0;
      r.mean_norm[i] += row[i];
    }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (std::size_t i = 0; i < T; ++i) {
    r.fraction_within[i] /= static_cast<double>(paths);
    r.mean_norm[i] /= static_cast<double>(paths);
    if (r.times[i] < fit_from || r.mean_norm[i] <= 0.0) continue;
    const double x = std::log(static_cast<double>(r.times[i])), y = std::log(r.mean_norm[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, m += 1;
  }
  r.exponent = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : NAN;
  return r;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
  return v;
}

bool Box::contains(const double* x) const {
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (!(x[j] >= lo[j] && x[j] < hi[j])) return false;
  return true;
}

Box Box::cube(int D, double half_width) {
  return Box{std::vector<double>(static_cast<std::size_t>(D), -half_width),
             std::vector<double>(static_cast<std::size_t>(D), half_width)};
}

double gaussian_box_mass(const Eigen::MatrixXd& sigma, const Box& box, double n) {
  const int D = static_cast<int>(sigma.rows());
  if (box.D() != D) throw std::invalid_argument("gaussian_box_mass: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(n * sigma);
  if (llt.info() != Eigen::Success || (n * sigma).diagonal().minCoeff() <= 0.0)
    throw std::invalid_argument("gaussian_box_mass: covariance is degenerate");
  const Eigen::MatrixXd L = llt.matrixL();
  if (L.diagonal().minCoeff() <= 1e-12 * L.diagonal().maxCoeff())
    throw std::invalid_argument("gaussian_box_mass: covariance is degenerate");
  using Rule = boost::math::quadrature::gauss<double, 64>;
  const auto& absc = Rule::abscissa();
  const auto& wts = Rule::weights();
  std::vector<double> z(static_cast<std::size_t>(D), 0.0);
  // X = L Z; condition Z_i on Z_0..Z_{i−1} and integrate over w ∈ [0, 1] with
  // Z_i = Φ⁻¹(d + w(e − d)), so every level contributes the factor (e − d).
  std::function<double(int)> level = [&](int i) -> double {
    double mu = 0.0;
    for (int j = 0; j < i; ++j) mu += L(i, j) * z[static_cast<std::size_t>(j)];
    const double a = (box.lo[i] - mu) / L(i, i), b = (box.hi[i] - mu) / L(i, i);
    const double d = std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : normal_cdf(a);
    const double e = std::isinf(b) ? (b < 0 ? 0.0 : 1.0) : normal_cdf(b);
    const double width = e - d;
    if (width <= 0.0) return 0.0;
    if (i == D - 1) return width;
    double acc = 0.0;
    auto node = [&](double w, double weight) {
      double p = std::clamp(d + w * width, 1e-300, 1.0 - 1e-16);
      z[static_cast<std::size_t>(i)] = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
      acc += weight * level(i + 1);
    };
    for (std::size_t k = 0; k < absc.size(); ++k) {
      node(0.5 + 0.5 * absc[k], 0.5 * wts[k]);
      node(0.5 - 0.5 * absc[k], 0.5 * wts[k]);
    }
    return width * acc;
  };
  return level(0);
}

double coin_box_probability(std::int64_t t, double lo, double hi) {
  double p = 0.0;
  for (std::int64_t k = 0; k <= t; ++k) {
    const double s = static_cast<double>(2 * k - t);
    if (s < lo || s >= hi) continue;
    const double lg = std::lgamma(static_cast<double>(t) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                      std::lgamma(static_cast<double>(t - k) + 1) - static_cast<double>(t) * std::log(2.0);
    p += std::exp(lg);
  }
  return p;
}

LltReport llt_estimate(const SystemSpec& spec, const Eigen::MatrixXd& sigma, const Box& box,
                       const std::vector<std::int64_t>& times, std::size_t paths, std::uint64_t seed,
                       const LltOptions& opt) {
  if (box.D() != spec.D) throw std::invalid_argument("llt_estimate: box dimension mismatch");
  if (times.empty() || paths == 0) throw std::invalid_argument("llt_estimate: need times and paths");
  const bool gaussian = opt.normalization == LltNormalization::gaussian;
  double sqrt_det = 0.0;
  if (sigma.size() > 0) {
    if (sigma.rows() != spec.D) throw std::invalid_argument("llt_estimate: Σ has wrong size");
    const double det = sigma.determinant();
    if (!(det > 1e-14 * std::pow(std::max(1e-300, sigma.trace() / spec.D), spec.D)))
      throw std::invalid_argument("llt_estimate: Σ is degenerate");
    sqrt_det = std::sqrt(det);
  } else if (gaussian) {
    throw std::invalid_argument("llt_estimate: gaussian normalization needs Σ");
  }
  auto norm_at = [&](double t) {
    if (gaussian) return std::pow(2.0 * std::numbers::pi * t, 0.5 * spec.D) * sqrt_det;
    return std::pow(t, opt.exponent);
  };

  LltReport r;
  r.times = times;
  r.box = box;
  r.paths = paths;
  r.reference = opt.reference.value_or(box.volume());
  std::int64_t horizon = 0;
  for (std::int64_t n : times) {
    const std::int64_t w = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(opt.window_fraction * n)));
    r.windows.push_back(w);
    horizon = std::max(horizon, n + w - 1);
  }
  const std::size_t T = times.size();
  struct PathHits {
    std::vector<double> pooled_count, pooled_norm, at_n;
  };
  auto per_path = parallel_map<PathHits>(paths, [&](std::size_t p) {
    PathHits h{std::vector<double>(T, 0.0), std::vector<double>(T, 0.0), std::vector<double>(T, 0.0)};
    walk_path(spec, seed, p, horizon, [&](std::int64_t k, std::size_t, const State&, const std::vector<double>& S) {
      if (!box.contains(S.data())) return;
      for (std::size_t i = 0; i < T; ++i) {
        if (k < times[i] || k >= times[i] + r.windows[i]) continue;
        h.pooled_count[i] += 1.0;
        h.pooled_norm[i] += norm_at(static_cast<double>(k));
        if (k == times[i]) h.at_n[i] += 1.0;
      }
    });
    return h;
  });
  for (std::size_t i = 0; i < T; ++i) {
    double cnt = 0.0, nsum = 0.0, at = 0.0;
    for (const auto& h : per_path) {
      cnt += h.pooled_count[i];
      nsum += h.pooled_norm[i];
      at += h.at_n[i];
    }
    const double samples = static_cast<double>(paths) * static_cast<double>(r.windows[i]);
    r.pooled_fraction.push_back(cnt / samples);
    r.normalized.push_back(nsum / samples);
    r.hit_fraction.push_back(at / static_cast<double>(paths));
    r.normalized_unpooled.push_back(at / static_cast<double>(paths) * norm_at(static_cast<double>(times[i])));
    r.rel_error.push_back(std::abs(r.normalized.back() - r.reference) / r.reference);
    if (sigma.size() > 0) {
      // Trapezoid over a few window points; the Gaussian mass varies slowly in t.
      const int pts = r.windows[i] > 1 ? 5 : 1;
      double g = 0.0, wsum = 0.0;
      for (int q = 0; q < pts; ++q) {
        const double t = static_cast<double>(times[i]) +
                         (pts > 1 ? static_cast<double>(r.windows[i] - 1) * q / (pts - 1) : 0.0);
        const double wq = (pts > 1 && (q == 0 || q == pts - 1)) ? 0.5 : 1.0;
        g += wq * norm_at(t) * gaussian_box_mass(sigma, box, t);
        wsum += wq;
      }
      r.gaussian_normalized.push_back(g / wsum);
    }
  }
  r.samples_per_time = paths * static_cast<std::size_t>(r.windows.back());
  return r;
}

}  // namespace gaplab
