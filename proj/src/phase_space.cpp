// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace gaplab {

double frac1(double v) {
  double r = v - std::floor(v + 0.5);
  if (r >= 0.5) r -= 1.0;
  if (r < -0.5) r += 1.0;
  return r;
}

ToralPoint frac_rep(const std::vector<double>& v) {
  ToralPoint p{v};
  for (double& c : p.coords) {
    if (!std::isfinite(c)) throw std::invalid_argument("frac_rep: non-finite coordinate");
    c = frac1(c);
  }
  return p;
}

TorusAction::TorusAction(const IntMatrix& m) : m_(m.to_double()) {}

void TorusAction::apply_inplace(double* x) const {
  const int d = static_cast<int>(m_.rows());
  double tmp[16];
  double* out = d <= 16 ? tmp : new double[static_cast<std::size_t>(d)];
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += m_(i, j) * x[j];
    out[i] = s;
  }
  for (int i = 0; i < d; ++i) x[i] = frac1(out[i]);
  if (out != tmp) delete[] out;
}

ToralPoint TorusAction::operator()(const ToralPoint& x) const {
  if (x.d() != d()) throw std::invalid_argument("torus_apply: dimension mismatch");
  ToralPoint r = x;
  apply_inplace(r.coords.data());
  return r;
}

ToralPoint torus_apply(const IntMatrix& m, const ToralPoint& x) { return TorusAction(m)(x); }

namespace {

// floor-based reduction into [0, 1); guards the v = −tiny case that rounds to 1.
inline double unit_rep(double v, double& shift) {
  shift = -std::floor(v);
  double r = v + shift;
  if (r >= 1.0) {
    r -= 1.0;
    shift -= 1.0;
  }
  return r;
}

}  // namespace

void nil_reduce_inplace(HeisenbergElement& g) {
  const int d = g.d();
  // g·(m,0,0) = (x+m, y, z − ⟨m,y⟩)
  for (int i = 0; i < d; ++i) {
    double m;
    g.x[i] = unit_rep(g.x[i], m);
    g.z -= m * g.y[i];
  }
  // g·(0,n,0) = (x, y+n, z + ⟨x,n⟩)
  for (int i = 0; i < d; ++i) {
    double n;
    g.y[i] = unit_rep(g.y[i], n);
    g.z += g.x[i] * n;
  }
  double k;
  g.z = unit_rep(g.z, k);
}

NilPoint nil_reduce(const HeisenbergElement& g) {
  NilPoint p{g};
  nil_reduce_inplace(p.rep);
  return p;
}

NilPoint nil_apply(const HeisenbergElement& alpha, const IntMatrix& D, const NilPoint& p) {
  if (alpha.d() != D.dim() || p.rep.d() != D.dim()) throw std::invalid_argument("nil_apply: dimension mismatch");
  return nil_reduce(heis_mul(alpha, heis_automorphism(D, p.rep)));
}

NilAffine::NilAffine(HeisenbergElement alpha, const IntMatrix& D)
    : alpha_(std::move(alpha)), tau_(D), scratch_(HeisenbergElement::neutral(D.dim())) {
  if (alpha_.d() != D.dim()) throw std::invalid_argument("NilAffine: dimension mismatch");
  if (!is_unimodular(D)) throw std::invalid_argument("NilAffine: D is not unimodular");
}

void NilAffine::apply_inplace(HeisenbergElement& g) const {
  const int d = g.d();
  double tx[16], ty[16];
  if (d > 16) {
    g = nil_reduce(heis_mul(alpha_, tau_(g))).rep;
    return;
  }
  tau_.apply(g.x.data(), g.y.data(), tx, ty);
  double pair = 0.0;
  for (int i = 0; i < d; ++i) {
    pair += alpha_.x[i] * ty[i] - tx[i] * alpha_.y[i];
    g.x[i] = alpha_.x[i] + tx[i];
    g.y[i] = alpha_.y[i] + ty[i];
  }
  g.z = alpha_.z + g.z + pair;
  nil_reduce_inplace(g);
}

SceneryLaw::SceneryLaw(std::vector<std::vector<double>> s, std::vector<double> w)
    : support(std::move(s)), weights(std::move(w)), table(weights) {
  if (support.size() != weights.size()) throw std::invalid_argument("SceneryLaw: support/weight size mismatch");
  for (auto& v : support)
    if (v.size() != support.front().size()) throw std::invalid_argument("SceneryLaw: ragged support");
}

std::vector<double> SceneryLaw::mean() const {
  std::vector<double> m(static_cast<std::size_t>(D()), 0.0);
  double total = 0.0;
  for (double w : weights) total += w;
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += weights[i] / total * support[i][j];
  return m;
}

std::uint64_t extend_fingerprint(std::uint64_t prefix, int letter) {
  return mix64(prefix, static_cast<std::uint64_t>(static_cast<std::int64_t>(letter)));
}

std::uint64_t word_fingerprint(std::uint64_t scenery_seed, const FreeWord& w) {
  std::uint64_t fp = mix64(scenery_seed, 0x5CE7E5EEDULL);
  for (int l : w.letters) fp = extend_fingerprint(fp, l);
  return fp;
}

std::size_t scenery_index(const SceneryLaw& law, std::uint64_t fingerprint) {
  CounterRng rng(fingerprint, 0, Domain::scenery);
  return law.table.sample(rng);
}

SceneryPoint SceneryPoint::make(std::uint64_t seed, bool use_cache) {
  SceneryPoint s;
  s.scenery_seed = seed;
  s.prefix_fp.push_back(word_fingerprint(seed, FreeWord{}));
  if (use_cache) s.cache = std::make_shared<std::unordered_map<std::uint64_t, std::uint32_t>>();
  return s;
}

void SceneryPoint::move(int letter) {
  if (!word.letters.empty() && word.letters.back() == -letter) {
    word.letters.pop_back();
    prefix_fp.pop_back();
  } else {
    word.letters.push_back(letter);
    prefix_fp.push_back(extend_fingerprint(prefix_fp.back(), letter));
  }
}

namespace {

const std::vector<double>& lookup_fp(const SceneryLaw& law, const SceneryPoint& s, std::uint64_t fp) {
  if (s.cache) {
    auto it = s.cache->find(fp);
    if (it != s.cache->end()) return law.support[it->second];
    std::size_t idx = scenery_index(law, fp);
    s.cache->emplace(fp, static_cast<std::uint32_t>(idx));
    return law.support[idx];
  }
  return law.support[scenery_index(law, fp)];
}

}  // namespace

const std::vector<double>& scenery_lookup(const SceneryLaw& law, const SceneryPoint& s, const FreeWord& w) {
  return lookup_fp(law, s, word_fingerprint(s.scenery_seed, w));
}

const std::vector<double>& scenery_current(const SceneryLaw& law, const SceneryPoint& s) {
  return lookup_fp(law, s, s.current_fingerprint());
}

void motion_displacement(const UnitaryMatrix& x, const Eigen::VectorXcd& tau, double* out) {
  const int d = x.dim();
  for (int i = 0; i < d; ++i) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < d; ++j) s += std::conj(x.m(j, i)) * tau(j);
    out[2 * i] = s.real();
    out[2 * i + 1] = s.imag();
  }
}

void reorthonormalize(UnitaryMatrix& u) {
  const int d = u.dim();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(u.m);
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
  for (int k = 0; k < d; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  std::complex<double> det = q.determinant();
  u.m = q / std::pow(det, 1.0 / d);
}

void motion_apply_inplace(const UnitaryMatrix& a, const Eigen::VectorXcd& tau_a, MotionState& s) {
  if (a.dim() != s.x.dim() || tau_a.size() != s.v.size()) throw std::invalid_argument("motion_apply: dimension mismatch");
  s.v += s.x.m.adjoint() * tau_a;
  s.x.m = a.m * s.x.m;
  if (s.x.unitarity_error() > 1e-10) reorthonormalize(s.x);
}

MotionState motion_apply(const UnitaryMatrix& a, const Eigen::VectorXcd& tau_a, const MotionState& s) {
  MotionState r = s;
  motion_apply_inplace(a, tau_a, r);
  return r;
}

}  // namespace gaplab
