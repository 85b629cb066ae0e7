#pragma once

#include <cmath>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/jet.hpp"

namespace moebius {

// Metric signature of an ambient coordinate space. Lorentzian means the
// first coordinate carries the minus sign: <a,b> = -a0*b0 + a1*b1 + ...
// Every inner product in the library goes through `inner` below; no other
// code spells out the sign.
enum class Signature { Euclidean, Lorentzian };

template <class T>
T inner(Signature sig, const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("inner product: dimension mismatch");
  T acc = a[0] * b[0];
  if (sig == Signature::Lorentzian) acc = -acc;
  for (size_t i = 1; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double lorentz_inner(const std::vector<double>& a, const std::vector<double>& b) {
  return inner(Signature::Lorentzian, a, b);
}

inline double scalar_value(double x) { return x; }
inline double scalar_value(const ScalarJet& x) { return x.value(); }

// Dense row-major matrix; T is double for point data and ScalarJet for fields.
template <class T>
class MatrixT {
 public:
  MatrixT() = default;
  MatrixT(int rows, int cols) : rows_(rows), cols_(cols), d_(rows * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return d_[i * cols_ + j]; }
  const T& operator()(int i, int j) const { return d_[i * cols_ + j]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> d_;
};

using Matrix = MatrixT<double>;
using JetMatrix = MatrixT<ScalarJet>;

template <class T>
class Tensor3T {
 public:
  Tensor3T() = default;
  Tensor3T(int n1, int n2, int n3) : n_{n1, n2, n3}, d_(n1 * n2 * n3) {}
  T& operator()(int i, int j, int k) { return d_[(i * n_[1] + j) * n_[2] + k]; }
  const T& operator()(int i, int j, int k) const {
    return d_[(i * n_[1] + j) * n_[2] + k];
  }
  int dim(int axis) const { return n_[axis]; }

 private:
  int n_[3] = {0, 0, 0};
  std::vector<T> d_;
};

using Tensor3 = Tensor3T<double>;
using JetTensor3 = Tensor3T<ScalarJet>;

class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(int n1, int n2, int n3, int n4) : n_{n1, n2, n3, n4}, d_(n1 * n2 * n3 * n4) {}
  double& operator()(int i, int j, int k, int l) {
    return d_[((i * n_[1] + j) * n_[2] + k) * n_[3] + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return d_[((i * n_[1] + j) * n_[2] + k) * n_[3] + l];
  }
  int dim(int axis) const { return n_[axis]; }

 private:
  int n_[4] = {0, 0, 0, 0};
  std::vector<double> d_;
};

namespace detail {
inline double pivot_size(double x) { return std::abs(x); }
inline double pivot_size(const ScalarJet& x) { return std::abs(x.value()); }
template <class T>
double pivot_size(const T& x) {  // exact types (Rational)
  return std::abs(x.to_double());
}
}  // namespace detail

// Gaussian elimination with partial pivoting, generic over any field type
// with +,-,*,/ (doubles, rationals, jets). zero/one seed the augmented
// identity so jet callers can pass constants over the right table.
template <class T>
std::vector<std::vector<T>> invert_matrix(std::vector<std::vector<T>> a, const T& zero,
                                          const T& one) {
  int n = static_cast<int>(a.size());
  std::vector<std::vector<T>> inv(n, std::vector<T>(n, zero));
  for (int i = 0; i < n; ++i) inv[i][i] = one;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (detail::pivot_size(a[r][col]) > detail::pivot_size(a[piv][col])) piv = r;
    if (detail::pivot_size(a[piv][col]) == 0.0)
      throw NumericError("matrix inversion: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    T d = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] = a[col][c] / d;
      inv[col][c] = inv[col][c] / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      T f = a[r][col];
      if (detail::pivot_size(f) == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r][c] = a[r][c] - f * a[col][c];
        inv[r][c] = inv[r][c] - f * inv[col][c];
      }
    }
  }
  return inv;
}

template <class T>
std::vector<T> solve_linear(std::vector<std::vector<T>> a, std::vector<T> b) {
  int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (detail::pivot_size(a[r][col]) > detail::pivot_size(a[piv][col])) piv = r;
    if (detail::pivot_size(a[piv][col]) == 0.0)
      throw NumericError("linear solve: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      T f = a[r][col] / a[col][col];
      if (detail::pivot_size(f) == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] = a[r][c] - f * a[col][c];
      b[r] = b[r] - f * b[col];
    }
  }
  std::vector<T> x = b;
  for (int r = n - 1; r >= 0; --r) {
    for (int c = r + 1; c < n; ++c) x[r] = x[r] - a[r][c] * x[c];
    x[r] = x[r] / a[r][r];
  }
  return x;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, sorted
// ascending. Sweeps run until the off-diagonal Frobenius mass drops below
// off_tol. Throws SymmetryError when the input is not symmetric.
std::vector<double> jacobi_eigenvalues(const Matrix& a, double off_tol = 1e-13);

struct EigenCluster {
  double value;  // mean of the cluster
  int multiplicity;
};

// Groups an ascending eigenvalue list, merging neighbors that differ by at
// most rel_tol * (1 + |value|).
std::vector<EigenCluster> cluster_eigenvalues(const std::vector<double>& ascending,
                                              double rel_tol);

}  // namespace moebius
