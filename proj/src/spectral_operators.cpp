// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaplab/spectral.hpp"

namespace gaplab {

FrequencyBall::FrequencyBall(int d, double R, bool include_zero)
    : d_(d), R_(R), E_(static_cast<int>(std::floor(R + 1e-9))), include_zero_(include_zero) {
  if (d < 1) throw std::invalid_argument("FrequencyBall: d must be positive");
  if (!(R >= 0.0)) throw std::invalid_argument("FrequencyBall: R must be non-negative");
  const std::size_t L = static_cast<std::size_t>(2 * E_ + 1);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= L;
  grid_.assign(total, -1);
  std::vector<int> p(static_cast<std::size_t>(d), -E_);
  const double r2 = R * R + 1e-9;
  for (std::size_t g = 0; g < total; ++g) {
    // g enumerates the grid with the last coordinate fastest, i.e. lexicographically.
    long long n2 = 0;
    bool zero = true;
    for (int v : p) {
      n2 += static_cast<long long>(v) * v;
      zero = zero && v == 0;
    }
    if (static_cast<double>(n2) <= r2 && (!zero || include_zero)) {
      grid_[g] = static_cast<long>(size());
      points_.insert(points_.end(), p.begin(), p.end());
      grid_pos_.push_back(g);
    }
    for (int j = d - 1; j >= 0; --j) {
      if (++p[j] <= E_) break;
      p[j] = -E_;
    }
  }
}

long FrequencyBall::index_of(const int* p) const {
  std::size_t g = 0;
  const long L = 2 * E_ + 1;
  for (int j = 0; j < d_; ++j) {
    if (p[j] < -E_ || p[j] > E_) return -1;
    g = g * static_cast<std::size_t>(L) + static_cast<std::size_t>(p[j] + E_);
  }
  return grid_[g];
}

long FrequencyBall::index_of(const std::vector<long long>& p) const {
  if (static_cast<int>(p.size()) != d_) throw std::invalid_argument("FrequencyBall::index_of: dimension mismatch");
  std::vector<int> q(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] < -E_ || p[j] > E_) return -1;
    q[j] = static_cast<int>(p[j]);
  }
  return index_of(q.data());
}

long FrequencyBall::zero_index() const {
  std::vector<int> z(static_cast<std::size_t>(d_), 0);
  return index_of(z.data());
}

double sawtooth_phase_coefficient(double lambda, long n) {
  const double theta = lambda - 2.0 * std::numbers::pi * static_cast<double>(n);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  if (std::abs(theta) < 1e-4) {
    // Here λ/2 = θ/2 + πn, so the value is sin(θ/2)/(θ/2).
    const double t2 = theta * theta;
    return 1.0 - t2 / 24.0 + t2 * t2 / 1920.0;
  }
  return sign * 2.0 * std::sin(0.5 * lambda) / theta;
}

SeparableMultiplier::SeparableMultiplier(const FrequencyBall& ball, const std::vector<double>& lambda)
    : E_(ball.extent()) {
  if (static_cast<int>(lambda.size()) != ball.d()) throw std::invalid_argument("SeparableMultiplier: dimension mismatch");
  kernel_.resize(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    kernel_[j].resize(static_cast<std::size_t>(4 * E_ + 1));
    for (long n = -2L * E_; n <= 2L * E_; ++n) kernel_[j][static_cast<std::size_t>(n + 2 * E_)] = sawtooth_phase_coefficient(lambda[j], n);
  }
}

void SeparableMultiplier::apply(const FrequencyBall& ball, const CVec& in, CVec& out, bool adjoint) const {
  const int d = ball.d();
  const std::size_t L = static_cast<std::size_t>(2 * E_ + 1);
  const std::size_t total = ball.grid_size();
  std::vector<cplx> grid(total, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < ball.size(); ++i) grid[ball.grid_index(i)] = in(static_cast<Eigen::Index>(i));
  std::vector<cplx> line_in(L), line_out(L);
  std::size_t stride = total;
  for (int axis = 0; axis < d; ++axis) {
    stride /= L;
    const auto& k = kernel_[static_cast<std::size_t>(axis)];
    const std::size_t block = stride * L;
    for (std::size_t outer = 0; outer < total; outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        bool any = false;
        for (std::size_t t = 0; t < L; ++t) {
          line_in[t] = grid[base + t * stride];
          any = any || line_in[t] != cplx(0.0, 0.0);
        }
        if (!any) continue;
        for (std::size_t q = 0; q < L; ++q) {
          cplx s(0.0, 0.0);
          // Entry (q, p) is k(q − p); the adjoint uses k(p − q) since k is real.
          const double* kq = adjoint ? k.data() + (2 * E_ - q) : k.data() + (q + 2 * E_);
          for (std::size_t p = 0; p < L; ++p) {
            const double w = adjoint ? kq[p] : *(kq - p);
            s += w * line_in[p];
          }
          line_out[q] = s;
        }
        for (std::size_t t = 0; t < L; ++t) grid[base + t * stride] = line_out[t];
      }
    }
  }
  out.resize(static_cast<Eigen::Index>(ball.size()));
  for (std::size_t i = 0; i < ball.size(); ++i) out(static_cast<Eigen::Index>(i)) = grid[ball.grid_index(i)];
}

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::dual_L:
      return "dual_L";
    case OperatorKind::P_restricted:
      return "P_restricted";
    case OperatorKind::P_lambda:
      return "P_lambda";
  }
  return "unknown";
}

TruncatedOperator::TruncatedOperator(FrequencyBall ball, OperatorKind kind, Sparse perm)
    : ball_(std::move(ball)), kind_(kind), perm_(std::move(perm)) {
  perm_adj_ = perm_.adjoint();
}

TruncatedOperator::TruncatedOperator(FrequencyBall ball, OperatorKind kind, Sparse perm, SeparableMultiplier mult)
    : ball_(std::move(ball)), kind_(kind), perm_(std::move(perm)), has_mult_(true), mult_(std::move(mult)) {
  perm_adj_ = perm_.adjoint();
}

void TruncatedOperator::apply(const CVec& in, CVec& out) const {
  if (!has_mult_) {
    out = perm_ * in;
    return;
  }
  scratch_ = perm_ * in;
  mult_.apply(ball_, scratch_, out, false);
}

void TruncatedOperator::apply_adjoint(const CVec& in, CVec& out) const {
  if (!has_mult_) {
    out = perm_adj_ * in;
    return;
  }
  mult_.apply(ball_, in, scratch_, true);
  out = perm_adj_ * scratch_;
}

double TruncatedOperator::norm_bound() const {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(perm_.rows()), col = Eigen::VectorXd::Zero(perm_.cols());
  for (Eigen::Index r = 0; r < perm_.outerSize(); ++r)
    for (Sparse::InnerIterator it(perm_, r); it; ++it) {
      row(it.row()) += std::abs(it.value());
      col(it.col()) += std::abs(it.value());
    }
  const double n1 = col.size() ? col.maxCoeff() : 0.0;
  const double ninf = row.size() ? row.maxCoeff() : 0.0;
  return std::sqrt(n1 * ninf);
}

Eigen::MatrixXcd TruncatedOperator::to_dense() const {
  const Eigen::Index n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m(n, n);
  CVec e = CVec::Zero(n), col;
  for (Eigen::Index j = 0; j < n; ++j) {
    e.setZero();
    e(j) = 1.0;
    apply(e, col);
    m.col(j) = col;
  }
  return m;
}

namespace {

std::vector<long long> int_entries(const IntMatrix& m) {
  std::vector<long long> v(static_cast<std::size_t>(m.dim() * m.dim()));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) v[static_cast<std::size_t>(i * m.dim() + j)] = m(i, j).convert_to<long long>();
  return v;
}

// out = Mᵗ p
void transpose_apply(const std::vector<long long>& m, int d, const int* p, std::vector<long long>& out) {
  for (int i = 0; i < d; ++i) {
    long long s = 0;
    for (int j = 0; j < d; ++j) s += m[static_cast<std::size_t>(j * d + i)] * p[j];
    out[static_cast<std::size_t>(i)] = s;
  }
}

TruncatedOperator::Sparse permutation_sum(const std::vector<IntMatrix>& gens, const std::vector<double>& weights,
                                          const FrequencyBall& ball, bool row_reads_image) {
  if (gens.size() != weights.size()) throw std::invalid_argument("operator build: generator/weight mismatch");
  const int d = ball.d();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(ball.size() * gens.size());
  std::vector<long long> img(static_cast<std::size_t>(d));
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].dim() != d) throw std::invalid_argument("operator build: generator dimension mismatch");
    auto m = int_entries(gens[g]);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      transpose_apply(m, d, ball.point(i), img);
      long j = ball.index_of(img);
      if (j < 0) continue;  // annihilated by the truncation
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      if (row_reads_image)
        trip.emplace_back(ii, jj, weights[g]);
      else
        trip.emplace_back(jj, ii, weights[g]);
    }
  }
  const auto n = static_cast<Eigen::Index>(ball.size());
  TruncatedOperator::Sparse s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  s.makeCompressed();
  return s;
}

}  // namespace

TruncatedOperator build_dual_operator(const std::vector<IntMatrix>& gens, const std::vector<double>& weights,
                                      const FrequencyBall& ball) {
  for (const auto& g : gens)
    if (!is_unimodular(g)) throw std::invalid_argument("build_dual_operator: generator is not unimodular");
  return TruncatedOperator(ball, OperatorKind::dual_L, permutation_sum(gens, weights, ball, true));
}

TruncatedOperator build_markov_operator(const TorusModel& model, const FrequencyBall& ball) {
  return TruncatedOperator(ball, OperatorKind::P_restricted, permutation_sum(model.gens, model.weights, ball, false));
}

TruncatedOperator build_P_lambda(const TorusModel& model, const std::vector<double>& lambda, const FrequencyBall& ball) {
  if (!model.sawtooth) throw std::invalid_argument("build_P_lambda: only the sawtooth displacement is supported");
  if (!ball.include_zero()) throw std::invalid_argument("build_P_lambda: the ball must contain frequency 0");
  return TruncatedOperator(ball, OperatorKind::P_lambda, permutation_sum(model.gens, model.weights, ball, false),
                           SeparableMultiplier(ball, lambda));
}

}  // namespace gaplab
