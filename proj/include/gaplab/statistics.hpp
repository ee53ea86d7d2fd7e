// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaplab/walk_engine.hpp"

namespace gaplab {

// Population normalization 1/n.
Eigen::MatrixXd empirical_covariance(const std::vector<std::vector<double>>& samples);
Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& rows);

double normal_cdf(double x);
// sup |F_n − Φ|.
double ks_normal(std::vector<double> z);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double quantile(std::vector<double> v, double q);

// S_n for paths 0..paths−1, one row per path.
Eigen::MatrixXd sample_endpoints(const SystemSpec& spec, std::int64_t n, std::size_t paths, std::uint64_t seed);

struct CltReport {
  std::int64_t n = 0;
  std::size_t paths = 0;
  Eigen::MatrixXd covariance;  // of S_n/√n
  Eigen::MatrixXd sigma_ref;
  double frobenius_rel_error = 0.0;
  std::vector<std::vector<double>> directions;
  std::vector<double> ks;
  double ks_max = 0.0;
};

// Projections: the D coordinate axes and 3 fixed random directions.
std::vector<std::vector<double>> clt_directions(int D);
CltReport clt_test(const SystemSpec& spec, std::int64_t n, std::size_t paths, const Eigen::MatrixXd& sigma_ref,
                   std::uint64_t seed);
CltReport clt_from_endpoints(const Eigen::MatrixXd& endpoints, std::int64_t n, const Eigen::MatrixXd& sigma_ref);

struct RecurrenceReport {
  std::vector<std::int64_t> horizons;
  // minima(p, j) = min_{1≤k≤N_j} ‖S_k‖ on path p.
  Eigen::MatrixXd minima;
  std::vector<double> median, q10, q90;
};

RecurrenceReport recurrence_profile(const SystemSpec& spec, const std::vector<std::int64_t>& horizons,
                                    std::size_t paths, std::uint64_t seed);

struct TransienceReport {
  std::vector<std::int64_t> times;  // dyadic, ending at n
  std::vector<double> fraction_within;
  std::vector<double> mean_norm;
  double radius = 0.0;
  double exponent = 0.0;  // slope of log mean‖S_t‖ against log t
  std::int64_t fit_from = 0;
};

TransienceReport transience_profile(const SystemSpec& spec, std::int64_t n, std::size_t paths, double radius,
                                    std::uint64_t seed, std::int64_t fit_from = 16);

/// Axis-aligned box [lo, hi).
struct Box {
  std::vector<double> lo, hi;
  int D() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(const double* x) const;
  static Box cube(int D, double half_width);
};

enum class LltNormalization {
  gaussian,  // (2πt)^{D/2} (det Σ)^{1/2}
  power,     // t^exponent
};

struct LltOptions {
  LltNormalization normalization = LltNormalization::gaussian;
  double exponent = 0.0;        // used by `power`
  double window_fraction = 1.0 / 16.0;
  std::optional<double> reference;  // defaults to the box volume
};

struct LltReport {
  std::vector<std::int64_t> times;
  std::vector<std::int64_t> windows;
  Box box;
  std::vector<double> hit_fraction;     // at t = n only
  std::vector<double> pooled_fraction;  // over [n, n + w]
  std::vector<double> normalized;       // pooled, normalized per time
  std::vector<double> normalized_unpooled;
  std::vector<double> gaussian_normalized;  // same normalization applied to the N(0, tΣ) box mass
  double reference = 0.0;
  std::vector<double> rel_error;
  std::size_t paths = 0;
  std::size_t samples_per_time = 0;  // path-time samples behind each pooled value
};

LltReport llt_estimate(const SystemSpec& spec, const Eigen::MatrixXd& sigma, const Box& box,
                       const std::vector<std::int64_t>& times, std::size_t paths, std::uint64_t seed,
                       const LltOptions& options = {});

// ∫_box density of N(0, nΣ); nested Gauss–Legendre after sequential conditioning.
double gaussian_box_mass(const Eigen::MatrixXd& sigma, const Box& box, double n);

// P(S_t ∈ [lo, hi)) for the ±1 coin walk, from binomial point masses.
double coin_box_probability(std::int64_t t, double lo, double hi);

}  // namespace gaplab
