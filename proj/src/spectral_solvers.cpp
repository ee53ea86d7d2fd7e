// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gaplab/rng.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {

namespace {

CVec random_unit(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream, Domain::restart);
  CVec v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double re = rng.normal();
    double im = rng.normal();
    v(i) = {re, im};
  }
  return v / v.norm();
}

}  // namespace

SpectralReport spectral_radius(const LinearOperator& op, int m_max, double tol, int restarts, std::uint64_t seed,
                               int upper_m) {
  if (m_max < 2) throw std::invalid_argument("spectral_radius: m_max must be >= 2");
  if (restarts < 1) throw std::invalid_argument("spectral_radius: need at least one restart");
  const std::size_t n = op.dim();
  SpectralReport rep;
  rep.dim = n;
  std::vector<int> checkpoints;
  for (int m = 1; m < m_max; m *= 2) checkpoints.push_back(m);
  checkpoints.push_back(m_max);
  std::vector<double> best_root(checkpoints.size(), 0.0), best_win(checkpoints.size(), 0.0);

  CVec v, w;
  for (int r = 0; r < restarts; ++r) {
    v = random_unit(n, seed, static_cast<std::uint64_t>(r));
    std::vector<double> logs(static_cast<std::size_t>(m_max + 1), 0.0);
    bool dead = false;
    for (int m = 1; m <= m_max; ++m) {
      if (dead) {
        logs[static_cast<std::size_t>(m)] = -std::numeric_limits<double>::infinity();
        continue;
      }
      op.apply(v, w);
      const double nrm = w.norm();
      if (nrm == 0.0 || !std::isfinite(nrm)) {
        dead = true;
        logs[static_cast<std::size_t>(m)] = -std::numeric_limits<double>::infinity();
        continue;
      }
      logs[static_cast<std::size_t>(m)] = logs[static_cast<std::size_t>(m - 1)] + std::log(nrm);
      v = w / nrm;
    }
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const int m = checkpoints[c];
      const double root = std::exp(logs[static_cast<std::size_t>(m)] / m);
      best_root[c] = std::max(best_root[c], root);
      const int h = m / 2;
      double win = root;
      if (h >= 1) win = std::exp((logs[static_cast<std::size_t>(m)] - logs[static_cast<std::size_t>(h)]) / (m - h));
      if (!std::isfinite(win)) win = 0.0;
      best_win[c] = std::max(best_win[c], win);
    }
  }
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    rep.estimates.emplace_back(checkpoints[c], best_root[c]);
    rep.windowed.emplace_back(checkpoints[c], best_win[c]);
  }
  rep.value = best_win.back();
  const double prev = best_win.size() >= 2 ? best_win[best_win.size() - 2] : best_win.back();
  rep.converged = std::abs(rep.value - prev) < tol;
  if (rep.value == 0.0) rep.flags.push_back("nilpotent_on_start");
  // The windowed ratios approach r(op) only like 1/m when the top of the spectrum is
  // a dense cluster, so the value is settled by Arnoldi when its residual is small.
  if (!rep.converged) {
    EigenResult eig = dominant_eigen(op, nullptr, 40, 100, tol);
    rep.eigen_residual = eig.residual;
    if (eig.converged && std::abs(eig.value) + 1e-9 >= rep.value) {
      rep.value = std::abs(eig.value);
      rep.converged = true;
    }
  }
  if (!rep.converged) rep.flags.push_back("not_converged");

  // ‖op^m‖ from the top singular value: power iteration on (op^m)* op^m.
  const int m = std::max(1, std::min(upper_m, m_max));
  rep.upper_m = m;
  v = random_unit(n, seed, 0x5EED0000ULL);
  double sv2 = 0.0;
  for (int it = 0; it < 60; ++it) {
    w = v;
    for (int k = 0; k < m; ++k) {
      op.apply(w, v);
      w.swap(v);
    }
    for (int k = 0; k < m; ++k) {
      op.apply_adjoint(w, v);
      w.swap(v);
    }
    const double nrm = w.norm();
    if (nrm == 0.0) {
      sv2 = 0.0;
      break;
    }
    const double change = std::abs(nrm - sv2);
    sv2 = nrm;
    v = w / nrm;
    if (change <= 1e-10 * nrm) break;
  }
  rep.upper = std::pow(sv2, 0.5 / m);
  if (rep.upper + 1e-12 < rep.value) rep.flags.push_back("upper_below_growth");
  return rep;
}

EigenResult dominant_eigen(const LinearOperator& op, const CVec* start, int krylov, int max_restarts, double tol,
                           double tie_tol) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  if (n == 0) throw std::invalid_argument("dominant_eigen: empty operator");
  const int k = static_cast<int>(std::min<Eigen::Index>(krylov, n));
  CVec q;
  if (start) {
    q = *start;
  } else {
    // A fixed pseudo-random start has a component along every invariant subspace.
    CounterRng rng(0xA4A01D1ULL, static_cast<std::uint64_t>(n), Domain::aux);
    q.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) q(i) = cplx(rng.normal(), rng.normal());
  }
  q /= q.norm();
  EigenResult res;
  Eigen::MatrixXcd V(n, k + 1);
  Eigen::MatrixXcd H;
  CVec w;
  for (int restart = 0; restart < max_restarts; ++restart) {
    H = Eigen::MatrixXcd::Zero(k + 1, k);
    V.col(0) = q;
    int m = k;
    double beta = 0.0;
    for (int j = 0; j < k; ++j) {
      op.apply(V.col(j), w);
      // Two passes of modified Gram–Schmidt.
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const cplx h = V.col(i).dot(w);
          H(i, j) += h;
          w -= h * V.col(i);
        }
      beta = w.norm();
      H(j + 1, j) = beta;
      if (beta < 1e-14) {
        m = j + 1;
        break;
      }
      V.col(j + 1) = w / beta;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(m, m));
    const auto& vals = es.eigenvalues();
    int best = 0, second = -1;
    for (int i = 1; i < m; ++i)
      if (std::abs(vals(i)) > std::abs(vals(best))) best = i;
    for (int i = 0; i < m; ++i)
      if (i != best && (second < 0 || std::abs(vals(i)) > std::abs(vals(second)))) second = i;
    CVec y = es.eigenvectors().col(best);
    y /= y.norm();
    CVec x = V.leftCols(m) * y;
    x /= x.norm();
    res.value = vals(best);
    res.second_modulus = second >= 0 ? std::abs(vals(second)) : 0.0;
    res.restarts = restart + 1;
    // Arnoldi residual ‖A x − θ x‖ = |h_{m+1,m}| |y_m|.
    res.residual = (m < k || beta < 1e-14) ? 0.0 : beta * std::abs(y(m - 1));
    res.vector = x;
    if (res.residual <= tol * std::max(1.0, std::abs(res.value))) {
      res.converged = true;
      break;
    }
    q = x;
  }
  // Recompute the residual directly to guard against loss of orthogonality.
  op.apply(res.vector, w);
  res.residual = std::max(res.residual, (w - res.value * res.vector).norm());
  res.converged = res.residual <= std::max(10.0 * tol, 1e-10) * std::max(1.0, std::abs(res.value));
  res.tie = std::abs(std::abs(res.value) - res.second_modulus) < tie_tol;
  // Phase: largest component real and positive.
  Eigen::Index imax = 0;
  res.vector.cwiseAbs().maxCoeff(&imax);
  const cplx ph = res.vector(imax) / std::abs(res.vector(imax));
  res.vector /= ph;
  return res;
}

PoissonResult solve_poisson(const LinearOperator& P, const CVec& h, double cutoff, int max_iter) {
  PoissonResult r;
  const auto n = static_cast<Eigen::Index>(P.dim());
  if (h.size() != n) throw std::invalid_argument("solve_poisson: dimension mismatch");
  r.u = -h;
  CVec term = h, next;
  const double start = std::max(h.norm(), 1e-300);
  double inc = h.norm();
  int it = 0;
  while (inc >= cutoff && it < max_iter) {
    P.apply(term, next);
    term.swap(next);
    r.u -= term;
    inc = term.norm();
    ++it;
    if (!std::isfinite(inc) || inc > 1e6 * start) {
      r.diverged = true;
      break;
    }
  }
  if (inc >= cutoff) r.diverged = true;
  r.iterations = it;
  r.last_increment = inc;
  P.apply(r.u, next);
  r.residual = (next - r.u - h).norm();
  return r;
}

}  // namespace gaplab
