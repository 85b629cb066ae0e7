#include "moebius/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace moebius {

std::vector<double> jacobi_eigenvalues(const Matrix& a, double off_tol) {
  int n = a.rows();
  if (n != a.cols()) throw ConfigError("eigenvalues: matrix not square");
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-10 * (1.0 + scale))
        throw SymmetryError("eigenvalues: matrix not symmetric");

  Matrix w = a;
  // symmetrize the rounding noise so rotations act on an exactly symmetric copy
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double m = 0.5 * (w(i, j) + w(j, i));
      w(i, j) = w(j, i) = m;
    }

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * w(i, j) * w(i, j);
    if (std::sqrt(off) <= off_tol * (1.0 + scale)) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = w(p, q);
        if (apq == 0.0) continue;
        double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double wkp = w(k, p), wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          double wpk = w(p, k), wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
      }
    }
  }

  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = w(i, i);
  std::sort(vals.begin(), vals.end());
  return vals;
}

std::vector<EigenCluster> cluster_eigenvalues(const std::vector<double>& ascending,
                                              double rel_tol) {
  std::vector<EigenCluster> out;
  size_t i = 0;
  while (i < ascending.size()) {
    size_t j = i + 1;
    double sum = ascending[i];
    while (j < ascending.size() &&
           ascending[j] - ascending[j - 1] <=
               rel_tol * (1.0 + std::abs(ascending[j]))) {
      sum += ascending[j];
      ++j;
    }
    out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return out;
}

}  // namespace moebius
