// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "gaplab/rng.hpp"

namespace gaplab {

using BigInt = boost::multiprecision::cpp_int;
using IntVector = std::vector<BigInt>;

/// Square matrix with exact integer entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int dim);

  static IntMatrix identity(int dim);
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);
  // Standard form J = [[0, I], [-I, 0]] of size 2d.
  static IntMatrix symplectic_form(int d);
  static IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b);

  int dim() const { return dim_; }
  BigInt& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * dim_ + j)]; }
  const BigInt& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * dim_ + j)]; }

  IntMatrix transpose() const;
  IntVector apply(const IntVector& v) const;
  // Entries as doubles; throws if any entry is not exactly representable.
  Eigen::MatrixXd to_double() const;
  std::string to_string() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  int dim_ = 0;
  std::vector<BigInt> a_;
};

BigInt det_int(const IntMatrix& m);
IntMatrix adjugate(const IntMatrix& m);
bool is_unimodular(const IntMatrix& m);
bool is_symplectic(const IntMatrix& m);
// Exact inverse of a matrix with det = ±1.
IntMatrix inverse_unimodular(const IntMatrix& m);
// ᵗM⁻¹, exact.
IntMatrix inverse_transpose(const IntMatrix& m);

IntMatrix q_of(const IntMatrix& a);
// (2b, d−a, −2c): fixed by q_of(A) when det A = 1.
IntVector q_fixed_vector(const IntMatrix& a);
// (c, d−a, −b): fixed by ᵗq_of(A) when det A = 1.
IntVector q_dual_fixed_vector(const IntMatrix& a);

IntVector int_vector(std::initializer_list<long long> v);
BigInt dot(const IntVector& a, const IntVector& b);

struct HeisenbergElement {
  std::vector<double> x;
  std::vector<double> y;
  double z = 0.0;

  static HeisenbergElement neutral(int d);
  int d() const { return static_cast<int>(x.size()); }
  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

HeisenbergElement heis_mul(const HeisenbergElement& g, const HeisenbergElement& h);
HeisenbergElement heis_inv(const HeisenbergElement& g);
HeisenbergElement heis_automorphism(const IntMatrix& D, const HeisenbergElement& g);

/// (x, y, z) -> (Dx, ᵗD⁻¹y, z) with both matrices precomputed.
class HeisenbergAutomorphism {
 public:
  explicit HeisenbergAutomorphism(const IntMatrix& D);
  void apply(const double* x, const double* y, double* x_out, double* y_out) const;
  HeisenbergElement operator()(const HeisenbergElement& g) const;
  int d() const { return static_cast<int>(D_.rows()); }
  const Eigen::MatrixXd& D() const { return D_; }
  const Eigen::MatrixXd& Dit() const { return Dit_; }

 private:
  Eigen::MatrixXd D_;
  Eigen::MatrixXd Dit_;
};

/// Reduced word in the free group; letter i > 0 is g_i, i < 0 is g_|i|⁻¹.
struct FreeWord {
  std::vector<int> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  friend bool operator==(const FreeWord&, const FreeWord&) = default;
};

bool is_reduced(const FreeWord& w);
FreeWord word_mul(const FreeWord& u, const FreeWord& v);
FreeWord word_inv(const FreeWord& w);

struct UnitaryMatrix {
  Eigen::MatrixXcd m;

  int dim() const { return static_cast<int>(m.rows()); }
  // ‖U*U − I‖_F
  double unitarity_error() const;
  std::complex<double> det() const { return m.determinant(); }
};

UnitaryMatrix haar_unitary(int d, CounterRng& rng);

}  // namespace gaplab
