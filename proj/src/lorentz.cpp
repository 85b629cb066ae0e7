#include "moebius/lorentz.hpp"

#include <cmath>

#include "moebius/errors.hpp"

namespace moebius {

void LorentzTransform::validate(double tol) const {
  int d = dim();
  if (d < 2 || mat.cols() != d) throw ConfigError("Lorentz transform: bad shape");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double acc = -mat(0, i) * mat(0, j);
      for (int k = 1; k < d; ++k) acc += mat(k, i) * mat(k, j);
      double want = (i == j) ? (i == 0 ? -1.0 : 1.0) : 0.0;
      if (std::abs(acc - want) > tol)
        throw ConsistencyError("Lorentz transform: T^t eta T != eta");
    }
  }
}

bool LorentzTransform::preserves_forward_cone(Rng& rng, int trials) const {
  int d = dim();
  for (int t = 0; t < trials; ++t) {
    std::vector<double> y(d);
    double norm2 = 0.0;
    for (int i = 1; i < d; ++i) {
      y[i] = rng.normal();
      norm2 += y[i] * y[i];
    }
    if (norm2 <= 0.0) continue;
    y[0] = std::sqrt(norm2);
    if (apply(y)[0] <= 0.0) return false;
  }
  return true;
}

std::vector<double> LorentzTransform::apply(const std::vector<double>& y) const {
  int d = dim();
  if (static_cast<int>(y.size()) != d)
    throw ConfigError("Lorentz transform: vector dimension mismatch");
  std::vector<double> out(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i] += mat(i, j) * y[j];
  return out;
}

LorentzTransform lorentz_identity(int dim) {
  LorentzTransform t;
  t.mat = Matrix(dim, dim);
  for (int i = 0; i < dim; ++i) t.mat(i, i) = 1.0;
  return t;
}

LorentzTransform lorentz_rotation(const Matrix& spatial) {
  int n = spatial.rows();
  LorentzTransform t = lorentz_identity(n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.mat(i + 1, j + 1) = spatial(i, j);
  return t;
}

LorentzTransform lorentz_boost(const std::vector<double>& v, double rapidity) {
  int n = static_cast<int>(v.size());
  double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  LorentzTransform t = lorentz_identity(n + 1);
  t.mat(0, 0) = ch;
  for (int i = 0; i < n; ++i) {
    t.mat(0, i + 1) = sh * v[i];
    t.mat(i + 1, 0) = sh * v[i];
    for (int j = 0; j < n; ++j) t.mat(i + 1, j + 1) = (i == j) + (ch - 1.0) * v[i] * v[j];
  }
  return t;
}

LorentzTransform compose(const LorentzTransform& a, const LorentzTransform& b) {
  int d = a.dim();
  if (b.dim() != d) throw ConfigError("Lorentz compose: dimension mismatch");
  LorentzTransform t;
  t.mat = Matrix(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += a.mat(i, k) * b.mat(k, j);
      t.mat(i, j) = acc;
    }
  return t;
}

LorentzTransform random_orthochronous(Rng& rng, int dim, double max_rapidity) {
  int n = dim - 1;
  // modified Gram-Schmidt of a Gaussian matrix, signs fixed for determinism
  std::vector<std::vector<double>> cols(n, std::vector<double>(n));
  for (auto& c : cols)
    for (double& x : c) x = rng.normal();
  Matrix rot(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += cols[i][k] * cols[j][k];
      for (int k = 0; k < n; ++k) cols[i][k] -= dot * cols[j][k];
    }
    double norm = 0.0;
    for (double x : cols[i]) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) throw NumericError("random rotation: degenerate draw");
    double sign = cols[i][i] >= 0.0 ? 1.0 : -1.0;
    for (int k = 0; k < n; ++k) cols[i][k] *= sign / norm;
    for (int k = 0; k < n; ++k) rot(k, i) = cols[i][k];
  }

  std::vector<double> dir(n);
  double norm = 0.0;
  for (double& x : dir) {
    x = rng.normal();
  }
  for (double x : dir) norm += x * x;
  norm = std::sqrt(norm);
  if (norm < 1e-8) throw NumericError("random boost: degenerate direction");
  for (double& x : dir) x /= norm;
  double rapidity = rng.uniform(0.1, max_rapidity);

  LorentzTransform t = compose(lorentz_rotation(rot), lorentz_boost(dir, rapidity));
  t.validate();
  return t;
}

}  // namespace moebius
