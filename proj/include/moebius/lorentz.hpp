#pragma once

#include <vector>

#include "moebius/linalg.hpp"
#include "moebius/rng.hpp"

namespace moebius {

// Linear map of R^{d}_1 preserving the Lorentzian form and the forward light
// cone. validate() checks T^t eta T = eta entrywise; the forward-cone side is
// screened statistically on random cone vectors since membership in the
// orthochronous component is not a finite algebraic identity.
struct LorentzTransform {
  Matrix mat;  // d x d, Lorentzian coordinate order (timelike first)

  int dim() const { return mat.rows(); }
  void validate(double tol = 1e-10) const;
  bool preserves_forward_cone(Rng& rng, int trials = 32) const;
  std::vector<double> apply(const std::vector<double>& y) const;
};

LorentzTransform lorentz_identity(int dim);

// Block rotation 1 (+) R acting on the spatial coordinates only.
LorentzTransform lorentz_rotation(const Matrix& spatial);

// Boost of given rapidity along a unit spatial direction.
LorentzTransform lorentz_boost(const std::vector<double>& direction, double rapidity);

LorentzTransform compose(const LorentzTransform& a, const LorentzTransform& b);

// Random element of the orthochronous group: a spatial rotation composed
// with a boost of rapidity at most max_rapidity. Validated on construction.
LorentzTransform random_orthochronous(Rng& rng, int dim, double max_rapidity = 1.0);

}  // namespace moebius
