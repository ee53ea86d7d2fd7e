// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "gaplab/parallel.hpp"
#include "gaplab/spectral.hpp"

namespace gaplab {

FourierField::FourierField(FrequencyBall ball, Eigen::MatrixXcd coeffs) : ball_(std::move(ball)), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != static_cast<Eigen::Index>(ball_.size()))
    throw std::invalid_argument("FourierField: coefficient rows must match the ball");
}

void FourierField::evaluate(const double* x, double* out) const {
  const int d = ball_.d();
  const int E = ball_.extent();
  const int L = 2 * E + 1;
  const int D = components();
  thread_local std::vector<cplx> table;
  table.resize(static_cast<std::size_t>(d * L));
  for (int j = 0; j < d; ++j)
    for (int n = -E; n <= E; ++n) {
      const double t = 2.0 * std::numbers::pi * n * x[j];
      table[static_cast<std::size_t>(j * L + n + E)] = {std::cos(t), std::sin(t)};
    }
  for (int c = 0; c < D; ++c) out[c] = 0.0;
  const cplx* data = coeffs_.data();
  const std::size_t rows = ball_.size();
  for (std::size_t i = 0; i < rows; ++i) {
    const int* p = ball_.point(i);
    cplx e = table[static_cast<std::size_t>(p[0] + E)];
    for (int j = 1; j < d; ++j) e *= table[static_cast<std::size_t>(j * L + p[j] + E)];
    for (int c = 0; c < D; ++c) {
      const cplx& k = data[static_cast<std::size_t>(c) * rows + i];
      out[c] += k.real() * e.real() - k.imag() * e.imag();
    }
  }
}

std::vector<double> FourierField::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != ball_.d()) throw std::invalid_argument("FourierField::evaluate: dimension mismatch");
  std::vector<double> out(static_cast<std::size_t>(components()));
  evaluate(x.data(), out.data());
  return out;
}

Eigen::MatrixXcd sawtooth_coefficients(const FrequencyBall& ball) {
  // ∫ t e^{−2πint} dt over [−1/2, 1/2) = i(−1)^n / (2πn) for n ≠ 0.
  const int d = ball.d();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ball.size()), d);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const int* p = ball.point(i);
    int nonzero = 0, axis = -1;
    for (int j = 0; j < d; ++j)
      if (p[j] != 0) ++nonzero, axis = j;
    if (nonzero != 1) continue;
    const int n = p[axis];
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    c(static_cast<Eigen::Index>(i), axis) = cplx(0.0, sign / (2.0 * std::numbers::pi * n));
  }
  return c;
}

PoissonSolution solve_poisson_sawtooth(const TorusModel& model, double R, double cutoff) {
  if (!model.sawtooth) throw std::invalid_argument("solve_poisson_sawtooth: model displacement is not the sawtooth");
  FrequencyBall ball(model.d, R, false);
  TruncatedOperator P = build_markov_operator(model, ball);
  Eigen::MatrixXcd h = sawtooth_coefficients(ball);
  Eigen::MatrixXcd u(h.rows(), h.cols()), res(h.rows(), h.cols());
  std::vector<PoissonResult> parts;
  CVec Pu;
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    PoissonResult r = solve_poisson(P, h.col(j), cutoff);
    u.col(j) = r.u;
    P.apply(r.u, Pu);
    res.col(j) = h.col(j) - (Pu - r.u);
    parts.push_back(std::move(r));
  }
  return PoissonSolution{FourierField(ball, h), FourierField(ball, u), FourierField(ball, res), std::move(parts)};
}

ModifiedDisplacement::ModifiedDisplacement(const SystemSpec& spec, const TorusModel& model, PoissonSolution sol)
    : spec_(spec), sol_(std::move(sol)) {
  for (const auto& g : model.gens) actions_.emplace_back(g);
  if (actions_.size() != spec.num_letters()) throw std::invalid_argument("ModifiedDisplacement: model/spec mismatch");
  if (sol_.u.components() != spec.D) throw std::invalid_argument("ModifiedDisplacement: component mismatch");
}

void ModifiedDisplacement::value(std::size_t a, const State& x, double* out) const {
  const auto& p = std::get<ToralPoint>(x);
  const std::size_t D = static_cast<std::size_t>(spec_.D);
  double ux[16], uy[16], y[16];
  spec_.displacement(a, x, out);
  std::copy(p.coords.begin(), p.coords.end(), y);
  actions_[a].apply_inplace(y);
  sol_.u.evaluate(p.coords.data(), ux);
  sol_.u.evaluate(y, uy);
  for (std::size_t j = 0; j < D; ++j) out[j] += ux[j] - uy[j];
}

Displacement ModifiedDisplacement::as_displacement() const {
  auto self = std::make_shared<ModifiedDisplacement>(*this);
  return [self](std::size_t a, const State& x, double* out) { self->value(a, x, out); };
}

std::vector<double> ModifiedDisplacement::projected_conditional_mean(const ToralPoint& x) const {
  return sol_.residual.evaluate(x.coords);
}

std::vector<double> ModifiedDisplacement::literal_conditional_mean(const ToralPoint& x) const {
  const std::size_t D = static_cast<std::size_t>(spec_.D);
  std::vector<double> m(D, 0.0), v(D);
  State s = x;
  for (std::size_t a = 0; a < spec_.num_letters(); ++a) {
    value(a, s, v.data());
    for (std::size_t j = 0; j < D; ++j) m[j] += spec_.weights[a] * v[j];
  }
  return m;
}

SigmaResult sigma_form(const SystemSpec& spec, const Displacement& c_prime, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("sigma_form: need at least 2 samples");
  const int D = spec.D;
  const std::size_t DD = static_cast<std::size_t>(D * D);
  // Per-sample second-moment matrices are kept for the error bars of the eigenvalues.
  std::vector<double> Q(samples * DD, 0.0);
  parallel_for(samples, [&](std::size_t i) {
    State x = sample_base(spec, seed, i);
    std::vector<double> c(static_cast<std::size_t>(D));
    double* q = Q.data() + i * DD;
    for (std::size_t a = 0; a < spec.num_letters(); ++a) {
      const double w = spec.weights[a];
      if (w == 0.0) continue;
      c_prime(a, x, c.data());
      for (int r = 0; r < D; ++r)
        for (int s = 0; s < D; ++s) q[r * D + s] += w * c[r] * c[s];
    }
  });
  SigmaResult res;
  res.samples = samples;
  res.sigma = Eigen::MatrixXd::Zero(D, D);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(D, D);
  for (std::size_t i = 0; i < samples; ++i) {
    const double* q = Q.data() + i * DD;
    for (int r = 0; r < D; ++r)
      for (int s = 0; s < D; ++s) {
        res.sigma(r, s) += q[r * D + s];
        sq(r, s) += q[r * D + s] * q[r * D + s];
      }
  }
  const double N = static_cast<double>(samples);
  res.sigma /= N;
  res.sigma = 0.5 * (res.sigma + res.sigma.transpose());
  res.stderr_ = ((sq / N - res.sigma.cwiseProduct(res.sigma)).cwiseMax(0.0) / (N - 1.0)).cwiseSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(res.sigma);
  res.min_eigenvalue = es.eigenvalues()(0);
  Eigen::VectorXd v = es.eigenvectors().col(0);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double* q = Q.data() + i * DD;
    double t = 0.0;
    for (int r = 0; r < D; ++r)
      for (int s = 0; s < D; ++s) t += v(r) * q[r * D + s] * v(s);
    s1 += t;
    s2 += t * t;
  }
  const double mean = s1 / N;
  res.min_eigenvalue_stderr = std::sqrt(std::max(0.0, s2 / N - mean * mean) / (N - 1.0));
  return res;
}

std::vector<PerturbationRow> perturbation_check(const TorusModel& model, const Eigen::MatrixXd& sigma,
                                                const std::vector<std::vector<double>>& directions,
                                                const std::vector<double>& radii, double R) {
  FrequencyBall ball(model.d, R, true);
  std::vector<PerturbationRow> rows;
  CVec e0 = CVec::Zero(static_cast<Eigen::Index>(ball.size()));
  e0(ball.zero_index()) = 1.0;
  for (const auto& dir : directions) {
    if (static_cast<int>(dir.size()) != model.d) throw std::invalid_argument("perturbation_check: direction dimension");
    double nrm = 0.0;
    for (double v : dir) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double r : radii) {
      PerturbationRow row;
      row.lambda.resize(dir.size());
      Eigen::VectorXd l(model.d);
      for (std::size_t j = 0; j < dir.size(); ++j) l(static_cast<Eigen::Index>(j)) = row.lambda[j] = r * dir[j] / nrm;
      TruncatedOperator op = build_P_lambda(model, row.lambda, ball);
      EigenResult eig = dominant_eigen(op, &e0);
      row.k = eig.value;
      row.converged = eig.converged;
      row.tie = eig.tie;
      row.sigma_lambda = l.dot(sigma * l);
      row.expansion = 1.0 - 0.5 * row.sigma_lambda;
      const double gap = 1.0 - eig.value.real();
      row.ratio = row.sigma_lambda > 0.0 ? gap / (0.5 * row.sigma_lambda) : (gap == 0.0 ? 1.0 : NAN);
      row.im_over_norm2 = r > 0.0 ? std::abs(eig.value.imag()) / (r * r) : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<std::vector<double>> RMuScan::flagged_points() const {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (flagged[i]) out.push_back(grid[i]);
  return out;
}

RMuScan scan_R_mu(const TorusModel& model, const std::vector<std::vector<double>>& grid, double R, double tol) {
  FrequencyBall ball(model.d, R, true);
  CVec e0 = CVec::Zero(static_cast<Eigen::Index>(ball.size()));
  e0(ball.zero_index()) = 1.0;
  RMuScan scan;
  scan.grid = grid;
  scan.tol = tol;
  scan.radius.resize(grid.size());
  scan.flagged.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    TruncatedOperator op = build_P_lambda(model, grid[i], ball);
    EigenResult eig = dominant_eigen(op, &e0);
    double r = std::abs(eig.value);
    if (!eig.converged) r = std::max(r, spectral_radius(op, 256, 1e-6, 2, 0x52AD105ULL + i).value);
    scan.radius[i] = r;
    scan.flagged[i] = r >= 1.0 - tol;
  }
  return scan;
}

RMuScan scan_R_mu_scenery(const SystemSpec& spec, const std::vector<std::vector<double>>& grid, std::int64_t n,
                          std::size_t paths, std::uint64_t seed, double tol) {
  auto* dyn = dynamic_cast<const SceneryDynamics*>(spec.dynamics.get());
  if (!dyn) throw std::invalid_argument("scan_R_mu_scenery: not a scenery scenario");
  const SceneryLaw& law = dyn->law();
  // Local-time histograms: (L, number of sites visited exactly L times before time n).
  auto hist = parallel_map<std::vector<std::pair<int, int>>>(paths, [&](std::size_t p) {
    std::unordered_map<std::uint64_t, int> local;
    walk_path(spec, seed, p, n, [&](std::int64_t, std::size_t, const State& x, const std::vector<double>&) {
      ++local[std::get<SceneryPoint>(x).current_fingerprint()];
    });
    std::map<int, int> h;
    for (const auto& kv : local) ++h[kv.second];
    return std::vector<std::pair<int, int>>(h.begin(), h.end());
  });
  RMuScan scan;
  scan.grid = grid;
  scan.tol = tol;
  for (const auto& lam : grid) {
    if (static_cast<int>(lam.size()) != spec.D) throw std::invalid_argument("scan_R_mu_scenery: λ dimension");
    auto phi = [&](double scale) {
      cplx s(0.0, 0.0);
      for (std::size_t v = 0; v < law.support.size(); ++v) {
        double t = 0.0;
        for (std::size_t j = 0; j < lam.size(); ++j) t += lam[j] * law.support[v][j];
        s += law.weights[v] * std::polar(1.0, scale * t);
      }
      return s;
    };
    cplx mean(0.0, 0.0);
    for (const auto& h : hist) {
      cplx prod(1.0, 0.0);
      for (const auto& [L, count] : h) prod *= std::pow(phi(static_cast<double>(L)), count);
      mean += prod;
    }
    mean /= static_cast<double>(paths);
    const double r = std::pow(std::abs(mean), 1.0 / static_cast<double>(n));
    scan.radius.push_back(r);
    scan.flagged.push_back(r >= 1.0 - tol);
  }
  return scan;
}

std::vector<std::vector<double>> axis_grid(int D, double step, double t_max) {
  std::vector<std::vector<double>> g;
  g.emplace_back(static_cast<std::size_t>(D), 0.0);
  for (int j = 0; j < D; ++j)
    for (int i = 1; i * step < t_max; ++i) {
      std::vector<double> p(static_cast<std::size_t>(D), 0.0);
      p[static_cast<std::size_t>(j)] = i * step;
      g.push_back(p);
    }
  return g;
}

KestenResult kesten_radius(int k, int n_max) {
  if (k < 1 || n_max < 1) throw std::invalid_argument("kesten_radius: k and n_max must be positive");
  KestenResult r;
  r.formula = std::sqrt(2.0 * k - 1.0) / k;
  r.n = n_max;
  // Distance from the identity is a birth-death chain; long double keeps μ^{2n}(e) above underflow.
  const long double up = (2.0L * k - 1.0L) / (2.0L * k), down = 1.0L / (2.0L * k);
  const int steps = 2 * n_max;
  std::vector<long double> p(static_cast<std::size_t>(steps + 2), 0.0L), q(p.size());
  p[0] = 1.0L;
  for (int s = 0; s < steps; ++s) {
    std::fill(q.begin(), q.end(), 0.0L);
    q[1] += p[0];
    for (int j = 1; j <= s; ++j) {
      q[static_cast<std::size_t>(j + 1)] += up * p[static_cast<std::size_t>(j)];
      q[static_cast<std::size_t>(j - 1)] += down * p[static_cast<std::size_t>(j)];
    }
    p.swap(q);
  }
  r.log_return_probability = static_cast<double>(std::log(p[0]));
  r.estimate = std::exp(r.log_return_probability / steps);
  return r;
}

DualOrbit dual_orbit(const IntMatrix& Mt, const IntVector& p, int K) {
  bool zero = true;
  for (const auto& v : p) zero = zero && v == 0;
  if (zero) throw std::invalid_argument("dual_orbit: p must be nonzero");
  if (static_cast<int>(p.size()) != Mt.dim()) throw std::invalid_argument("dual_orbit: dimension mismatch");
  DualOrbit o;
  o.prefix.push_back(p);
  std::set<IntVector> seen{p};
  for (int k = 1; k <= K; ++k) {
    IntVector next = Mt.apply(o.prefix.back());
    o.prefix.push_back(next);
    if (!seen.insert(next).second) {
      o.status = OrbitStatus::repeats;
      o.repeat_step = k;
      break;
    }
  }
  o.norms_increasing_from_2 = o.status == OrbitStatus::escapes;
  for (std::size_t k = 2; k < o.prefix.size() && o.norms_increasing_from_2; ++k)
    if (dot(o.prefix[k], o.prefix[k]) <= dot(o.prefix[k - 1], o.prefix[k - 1])) o.norms_increasing_from_2 = false;
  return o;
}

std::size_t group_orbit_size(const std::vector<IntMatrix>& gens, const IntVector& p, std::size_t limit) {
  std::set<IntVector> seen{p};
  std::deque<IntVector> queue{p};
  while (!queue.empty() && seen.size() < limit) {
    IntVector v = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      IntVector w = g.apply(v);
      if (seen.insert(w).second) {
        queue.push_back(w);
        if (seen.size() >= limit) break;
      }
    }
  }
  return seen.size();
}

}  // namespace gaplab
