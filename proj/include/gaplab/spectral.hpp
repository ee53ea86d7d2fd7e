// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gaplab/group_algebra.hpp"
#include "gaplab/scenarios.hpp"
#include "gaplab/walk_engine.hpp"

namespace gaplab {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

/**
 * Lattice points p ∈ Z^d with ‖p‖ ≤ R, in lexicographic order.
 *
 * 0 is excluded unless include_zero is set (operators on mean-zero functions
 * exclude it; P_λ needs the constants).
 */
class FrequencyBall {
 public:
  FrequencyBall(int d, double R, bool include_zero = false);

  int d() const { return d_; }
  double R() const { return R_; }
  int extent() const { return E_; }
  bool include_zero() const { return include_zero_; }
  std::size_t size() const { return points_.size() / static_cast<std::size_t>(d_); }
  const int* point(std::size_t i) const { return points_.data() + i * static_cast<std::size_t>(d_); }
  // −1 if p is outside the ball (or is 0 and 0 is excluded).
  long index_of(const int* p) const;
  long index_of(const std::vector<long long>& p) const;
  long zero_index() const;
  // Position of point i on the dense (2E+1)^d grid.
  std::size_t grid_index(std::size_t i) const { return grid_pos_[i]; }
  std::size_t grid_size() const { return grid_.size(); }

 private:
  int d_;
  double R_;
  int E_;
  bool include_zero_;
  std::vector<int> points_;
  std::vector<long> grid_;
  std::vector<std::size_t> grid_pos_;
};

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dim() const = 0;
  virtual void apply(const CVec& in, CVec& out) const = 0;
  virtual void apply_adjoint(const CVec& in, CVec& out) const = 0;
};

/// Wraps a dense or sparse matrix; used for small test operators.
class MatrixOperator : public LinearOperator {
 public:
  explicit MatrixOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {}
  std::size_t dim() const override { return static_cast<std::size_t>(m_.rows()); }
  void apply(const CVec& in, CVec& out) const override { out = m_ * in; }
  void apply_adjoint(const CVec& in, CVec& out) const override { out = m_.adjoint() * in; }

 private:
  Eigen::MatrixXcd m_;
};

// ∫_{−1/2}^{1/2} e^{iλt} e^{−2πint} dt = (−1)^n · 2 sin(λ/2) / (λ − 2πn).
double sawtooth_phase_coefficient(double lambda, long n);

/**
 * Π M Π on the ball, where M is multiplication by Π_j e^{iλ_j {x_j}}.
 *
 * The Fourier kernel factors across coordinates, so the product is applied as
 * d one-dimensional convolutions on the dense grid.
 */
class SeparableMultiplier {
 public:
  SeparableMultiplier(const FrequencyBall& ball, const std::vector<double>& lambda);
  void apply(const FrequencyBall& ball, const CVec& in, CVec& out, bool adjoint) const;
  double coefficient(int axis, long n) const { return kernel_[axis][static_cast<std::size_t>(n + 2 * E_)]; }

 private:
  int E_;
  std::vector<std::vector<double>> kernel_;  // index n + 2E for n ∈ [−2E, 2E]
};

enum class OperatorKind { dual_L, P_restricted, P_lambda };
std::string to_string(OperatorKind k);

class TruncatedOperator : public LinearOperator {
 public:
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  TruncatedOperator(FrequencyBall ball, OperatorKind kind, Sparse perm);
  TruncatedOperator(FrequencyBall ball, OperatorKind kind, Sparse perm, SeparableMultiplier mult);

  std::size_t dim() const override { return ball_.size(); }
  void apply(const CVec& in, CVec& out) const override;
  void apply_adjoint(const CVec& in, CVec& out) const override;

  const FrequencyBall& ball() const { return ball_; }
  OperatorKind kind() const { return kind_; }
  const Sparse& sparse_part() const { return perm_; }
  bool has_multiplier() const { return has_mult_; }
  // sqrt(‖T‖₁‖T‖∞) of the sparse factor; the multiplier is a compression of a unitary.
  double norm_bound() const;
  Eigen::MatrixXcd to_dense() const;

 private:
  FrequencyBall ball_;
  OperatorKind kind_;
  Sparse perm_;
  Sparse perm_adj_;
  bool has_mult_ = false;
  SeparableMultiplier mult_{FrequencyBall(1, 0.0, true), {0.0}};
  mutable CVec scratch_;
};

// (Lf)(p) = Σ_γ μ(γ) f(γᵗp); images outside the ball are dropped.
TruncatedOperator build_dual_operator(const std::vector<IntMatrix>& gens, const std::vector<double>& weights,
                                      const FrequencyBall& ball);
// P in the character basis: the coefficient at p moves to aᵗp.
TruncatedOperator build_markov_operator(const TorusModel& model, const FrequencyBall& ball);
// Requires ball.include_zero() and a sawtooth displacement.
TruncatedOperator build_P_lambda(const TorusModel& model, const std::vector<double>& lambda, const FrequencyBall& ball);

struct SpectralReport {
  std::string kind;
  double ball_radius = 0.0;
  std::size_t dim = 0;
  // (m, ‖op^m v‖^{1/m}), max over restarts.
  std::vector<std::pair<int, double>> estimates;
  // (m, (‖op^m v‖ / ‖op^{m/2} v‖)^{2/m}), max over restarts.
  std::vector<std::pair<int, double>> windowed;
  double value = 0.0;  // windowed estimate at m_max, or |dominant eigenvalue| once Arnoldi converges
  double eigen_residual = -1.0;
  double upper = 0.0;  // ‖op^m‖^{1/m} by power iteration on (op^m)*op^m
  int upper_m = 0;
  double norm_bound = -1.0;  // rigorous ‖op‖ bound when available
  bool converged = false;
  std::vector<std::string> flags;
};

SpectralReport spectral_radius(const LinearOperator& op, int m_max, double tol, int restarts, std::uint64_t seed,
                               int upper_m = 16);

struct EigenResult {
  cplx value{0.0, 0.0};
  CVec vector;
  double residual = 0.0;
  double second_modulus = 0.0;
  int restarts = 0;
  bool converged = false;
  bool tie = false;
};

// Restarted Arnoldi for the largest-modulus eigenvalue; starts from `start` or a fixed pseudo-random vector.
EigenResult dominant_eigen(const LinearOperator& op, const CVec* start = nullptr, int krylov = 30,
                           int max_restarts = 200, double tol = 1e-12, double tie_tol = 1e-9);

struct PoissonResult {
  CVec u;
  double residual = 0.0;  // ‖(P − I)u − h‖
  double last_increment = 0.0;
  int iterations = 0;
  bool diverged = false;
};

// u = −Σ_k P^k h until the increment drops below cutoff.
PoissonResult solve_poisson(const LinearOperator& P, const CVec& h, double cutoff = 1e-12, int max_iter = 1000000);

/// Vector-valued trigonometric polynomial on T^d with coefficients on a ball.
class FourierField {
 public:
  FourierField(FrequencyBall ball, Eigen::MatrixXcd coeffs);
  const FrequencyBall& ball() const { return ball_; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }
  int components() const { return static_cast<int>(coeffs_.cols()); }
  // Real part of Σ_p c_p e^{2πi⟨p,x⟩}, per component.
  void evaluate(const double* x, double* out) const;
  std::vector<double> evaluate(const std::vector<double>& x) const;

 private:
  FrequencyBall ball_;
  Eigen::MatrixXcd coeffs_;
};

// Coefficients of x -> {x_j}, j = 0..d−1, restricted to the ball.
Eigen::MatrixXcd sawtooth_coefficients(const FrequencyBall& ball);

struct PoissonSolution {
  FourierField h;         // truncated sawtooth
  FourierField u;         // (P_R − I)u = h_R
  FourierField residual;  // h_R − (P_R − I)u
  std::vector<PoissonResult> per_component;
};

PoissonSolution solve_poisson_sawtooth(const TorusModel& model, double R, double cutoff = 1e-12);

/// c′(a, x) = c(a, x) − u(ax) + u(x) for a torus scenario with a Fourier-truncated u.
class ModifiedDisplacement {
 public:
  ModifiedDisplacement(const SystemSpec& spec, const TorusModel& model, PoissonSolution sol);
  void value(std::size_t a, const State& x, double* out) const;
  Displacement as_displacement() const;
  // Σ_a μ(a) c′(a, x) computed inside the truncated space: h_R − (P_R − I)u at x.
  std::vector<double> projected_conditional_mean(const ToralPoint& x) const;
  // Σ_a μ(a) c′(a, x) with c and u evaluated pointwise; differs by the truncation leakage.
  std::vector<double> literal_conditional_mean(const ToralPoint& x) const;
  const PoissonSolution& solution() const { return sol_; }

 private:
  SystemSpec spec_;
  std::vector<TorusAction> actions_;
  PoissonSolution sol_;
};

struct SigmaResult {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd stderr_;
  double min_eigenvalue = 0.0;
  double min_eigenvalue_stderr = 0.0;
  std::size_t samples = 0;
};

// Σ = E_ν Σ_a μ(a) c′_a(x) c′_a(x)ᵗ by Monte Carlo over x; the a-sum is exact.
SigmaResult sigma_form(const SystemSpec& spec, const Displacement& c_prime, std::size_t samples, std::uint64_t seed);

struct PerturbationRow {
  std::vector<double> lambda;
  cplx k;
  double sigma_lambda;      // λᵗΣλ
  double expansion;         // 1 − Σ(λ)/2
  double ratio;             // (1 − Re k)/(Σ(λ)/2)
  double im_over_norm2;     // |Im k| / |λ|²
  bool converged;
  bool tie;
};

std::vector<PerturbationRow> perturbation_check(const TorusModel& model, const Eigen::MatrixXd& sigma,
                                                const std::vector<std::vector<double>>& directions,
                                                const std::vector<double>& radii, double R);

struct RMuScan {
  std::vector<std::vector<double>> grid;
  std::vector<double> radius;
  std::vector<bool> flagged;
  double tol = 0.0;

  std::vector<std::vector<double>> flagged_points() const;
};

// r(P_λ) from the dominant eigenvalue of the truncated P_λ.
RMuScan scan_R_mu(const TorusModel& model, const std::vector<std::vector<double>>& grid, double R, double tol);
// Lower estimate |E e^{i⟨λ,S_n⟩}|^{1/n}; the scenery is integrated exactly given the walk path.
RMuScan scan_R_mu_scenery(const SystemSpec& spec, const std::vector<std::vector<double>>& grid, std::int64_t n,
                          std::size_t paths, std::uint64_t seed, double tol);
// Points t·e_j for t on the grid, plus 0.
std::vector<std::vector<double>> axis_grid(int D, double step, double t_max);

struct KestenResult {
  double formula = 0.0;
  double estimate = 0.0;
  double log_return_probability = 0.0;  // log μ^{2n}(e)
  int n = 0;
};

KestenResult kesten_radius(int k, int n_max);

enum class OrbitStatus { repeats, escapes };

struct DualOrbit {
  std::vector<IntVector> prefix;
  OrbitStatus status = OrbitStatus::escapes;
  int repeat_step = -1;  // first k with Mtᵏp equal to an earlier iterate
  bool norms_increasing_from_2 = false;
};

DualOrbit dual_orbit(const IntMatrix& Mt, const IntVector& p, int K);
// Size of the orbit of p under the group generated by `gens`, capped at `limit`.
std::size_t group_orbit_size(const std::vector<IntMatrix>& gens, const IntVector& p, std::size_t limit);

}  // namespace gaplab
