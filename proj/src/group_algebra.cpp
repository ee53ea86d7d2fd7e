// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/group_algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gaplab {

IntMatrix::IntMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim * dim)) {
  if (dim <= 0) throw std::invalid_argument("IntMatrix: dim must be positive");
}

IntMatrix IntMatrix::identity(int dim) {
  IntMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  IntMatrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.dim_; ++i) {
    if (static_cast<int>(rows[i].size()) != m.dim_) throw std::invalid_argument("IntMatrix: not square");
    for (int j = 0; j < m.dim_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<std::vector<long long>> r;
  for (auto& row : rows) r.emplace_back(row);
  return from_rows(r);
}

IntMatrix IntMatrix::symplectic_form(int d) {
  IntMatrix j(2 * d);
  for (int i = 0; i < d; ++i) {
    j(i, d + i) = 1;
    j(d + i, i) = -1;
  }
  return j;
}

IntMatrix IntMatrix::block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.dim() + b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) m(a.dim() + i, a.dim() + j) = b(i, j);
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("IntMatrix::apply: dimension mismatch");
  IntVector out(v.size());
  for (int i = 0; i < dim_; ++i) {
    BigInt s = 0;
    for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Eigen::MatrixXd IntMatrix::to_double() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const BigInt& e = (*this)(i, j);
      if (abs(e) > BigInt(1) << 53) throw std::overflow_error("IntMatrix::to_double: entry exceeds 2^53");
      m(i, j) = e.convert_to<double>();
    }
  return m;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < dim_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < dim_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("IntMatrix product: dimension mismatch");
  IntMatrix c(a.dim_);
  for (int i = 0; i < a.dim_; ++i)
    for (int k = 0; k < a.dim_; ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < a.dim_; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

BigInt det_int(const IntMatrix& m) {
  // Bareiss fraction-free elimination; every division is exact.
  const int n = m.dim();
  std::vector<BigInt> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k * n + k] == 0) {
      int p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

IntMatrix adjugate(const IntMatrix& m) {
  const int n = m.dim();
  IntMatrix adj(n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IntMatrix minor(n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      BigInt cof = det_int(minor);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : BigInt(-cof);
    }
  return adj;
}

bool is_unimodular(const IntMatrix& m) { return abs(det_int(m)) == 1; }

bool is_symplectic(const IntMatrix& m) {
  if (m.dim() % 2 != 0) return false;
  IntMatrix j = IntMatrix::symplectic_form(m.dim() / 2);
  return m.transpose() * j * m == j;
}

IntMatrix inverse_unimodular(const IntMatrix& m) {
  BigInt det = det_int(m);
  if (abs(det) != 1) throw std::invalid_argument("inverse_unimodular: |det| != 1");
  IntMatrix adj = adjugate(m);
  if (det == -1)
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j < m.dim(); ++j) adj(i, j) = -adj(i, j);
  return adj;
}

IntMatrix inverse_transpose(const IntMatrix& m) { return inverse_unimodular(m).transpose(); }

IntMatrix q_of(const IntMatrix& A) {
  if (A.dim() != 2) throw std::invalid_argument("q_of: expects a 2x2 matrix");
  const BigInt &a = A(0, 0), &b = A(0, 1), &c = A(1, 0), &d = A(1, 1);
  IntMatrix q(3);
  q(0, 0) = a * a;
  q(0, 1) = 2 * a * b;
  q(0, 2) = b * b;
  q(1, 0) = a * c;
  q(1, 1) = a * d + b * c;
  q(1, 2) = b * d;
  q(2, 0) = c * c;
  q(2, 1) = 2 * c * d;
  q(2, 2) = d * d;
  return q;
}

IntVector q_fixed_vector(const IntMatrix& A) {
  if (A.dim() != 2) throw std::invalid_argument("q_fixed_vector: expects a 2x2 matrix");
  return {2 * A(0, 1), A(1, 1) - A(0, 0), -2 * A(1, 0)};
}

IntVector q_dual_fixed_vector(const IntMatrix& A) {
  if (A.dim() != 2) throw std::invalid_argument("q_dual_fixed_vector: expects a 2x2 matrix");
  return {A(1, 0), A(1, 1) - A(0, 0), -A(0, 1)};
}

IntVector int_vector(std::initializer_list<long long> v) {
  IntVector out;
  for (long long x : v) out.emplace_back(x);
  return out;
}

BigInt dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

HeisenbergElement HeisenbergElement::neutral(int d) {
  return {std::vector<double>(static_cast<std::size_t>(d), 0.0), std::vector<double>(static_cast<std::size_t>(d), 0.0), 0.0};
}

HeisenbergElement heis_mul(const HeisenbergElement& g, const HeisenbergElement& h) {
  const int d = g.d();
  if (h.d() != d || static_cast<int>(g.y.size()) != d || static_cast<int>(h.y.size()) != d)
    throw std::invalid_argument("heis_mul: dimension mismatch");
  HeisenbergElement r = HeisenbergElement::neutral(d);
  double pair = 0.0;
  for (int i = 0; i < d; ++i) {
    r.x[i] = g.x[i] + h.x[i];
    r.y[i] = g.y[i] + h.y[i];
    pair += g.x[i] * h.y[i] - h.x[i] * g.y[i];
  }
  r.z = g.z + h.z + pair;
  return r;
}

HeisenbergElement heis_inv(const HeisenbergElement& g) {
  HeisenbergElement r = g;
  for (auto& v : r.x) v = -v;
  for (auto& v : r.y) v = -v;
  r.z = -r.z;
  return r;
}

HeisenbergElement heis_automorphism(const IntMatrix& D, const HeisenbergElement& g) {
  if (D.dim() != g.d()) throw std::invalid_argument("heis_automorphism: dimension mismatch");
  if (!is_unimodular(D)) throw std::invalid_argument("heis_automorphism: D is not unimodular");
  return HeisenbergAutomorphism(D)(g);
}

HeisenbergAutomorphism::HeisenbergAutomorphism(const IntMatrix& D)
    : D_(D.to_double()), Dit_(inverse_transpose(D).to_double()) {}

void HeisenbergAutomorphism::apply(const double* x, const double* y, double* x_out, double* y_out) const {
  const int d = static_cast<int>(D_.rows());
  for (int i = 0; i < d; ++i) {
    double sx = 0.0, sy = 0.0;
    for (int j = 0; j < d; ++j) {
      sx += D_(i, j) * x[j];
      sy += Dit_(i, j) * y[j];
    }
    x_out[i] = sx;
    y_out[i] = sy;
  }
}

HeisenbergElement HeisenbergAutomorphism::operator()(const HeisenbergElement& g) const {
  if (g.d() != d()) throw std::invalid_argument("HeisenbergAutomorphism: dimension mismatch");
  HeisenbergElement r = g;
  apply(g.x.data(), g.y.data(), r.x.data(), r.y.data());
  return r;
}

bool is_reduced(const FreeWord& w) {
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (w.letters[i] == 0) return false;
    if (i > 0 && w.letters[i] == -w.letters[i - 1]) return false;
  }
  return true;
}

FreeWord word_mul(const FreeWord& u, const FreeWord& v) {
  std::size_t cut = 0;
  while (cut < u.size() && cut < v.size() && u.letters[u.size() - 1 - cut] == -v.letters[cut]) ++cut;
  FreeWord r;
  r.letters.reserve(u.size() + v.size() - 2 * cut);
  r.letters.insert(r.letters.end(), u.letters.begin(), u.letters.end() - static_cast<std::ptrdiff_t>(cut));
  r.letters.insert(r.letters.end(), v.letters.begin() + static_cast<std::ptrdiff_t>(cut), v.letters.end());
  return r;
}

FreeWord word_inv(const FreeWord& w) {
  FreeWord r;
  r.letters.assign(w.letters.rbegin(), w.letters.rend());
  for (auto& l : r.letters) l = -l;
  return r;
}

double UnitaryMatrix::unitarity_error() const {
  const int d = dim();
  return (m.adjoint() * m - Eigen::MatrixXcd::Identity(d, d)).norm();
}

UnitaryMatrix haar_unitary(int d, CounterRng& rng) {
  if (d < 2) throw std::invalid_argument("haar_unitary: d must be >= 2");
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::MatrixXcd g(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        double re = rng.normal();
        double im = rng.normal();
        g(i, j) = {re, im};
      }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
    bool degenerate = false;
    for (int k = 0; k < d; ++k) {
      double mag = std::abs(r(k, k));
      if (mag < 1e-12) {
        degenerate = true;
        break;
      }
      // Q R = (Q Λ)(Λ* R) with Λ = diag(phase(r_kk)) makes diag(R) positive real.
      q.col(k) *= r(k, k) / mag;
    }
    if (degenerate) continue;
    std::complex<double> det = q.determinant();
    std::complex<double> root = std::pow(det, 1.0 / d);
    UnitaryMatrix u{q / root};
    return u;
  }
  throw std::runtime_error("haar_unitary: repeated degenerate Gaussian draws");
}

}  // namespace gaplab
