#pragma once

#include <memory>
#include <span>
#include <vector>

#include "moebius/multiindex.hpp"

namespace moebius {

// One scalar function's truncated Taylor expansion around a chart point.
// Coefficients follow the partial/alpha! convention, so coeff(alpha) is the
// alpha-th Taylor coefficient, not the bare partial derivative.
//
// Each jet tracks how many coefficient degrees are actually trustworthy
// (valid_order). Differentiating drops it by one; combining jets takes the
// minimum. Reading past it throws JetOrderError, which is how "insufficient
// jet order" surfaces instead of silently wrong numbers.
class ScalarJet {
 public:
  ScalarJet() = default;

  static ScalarJet constant(std::shared_ptr<const MultiIndexTable> tab, double v);
  static ScalarJet variable(std::shared_ptr<const MultiIndexTable> tab, int var,
                            double base);

  const std::shared_ptr<const MultiIndexTable>& table() const { return tab_; }
  int valid_order() const { return valid_; }
  double value() const { return c_[0]; }

  double coeff(const std::vector<int>& alpha) const;
  double partial(const std::vector<int>& alpha) const;  // coeff * alpha!
  double coeff_slot(int slot) const;                    // checked against valid order

  // d/du_var as a jet of one order less.
  ScalarJet derivative(int var) const;

  ScalarJet& operator+=(const ScalarJet& o);
  ScalarJet& operator-=(const ScalarJet& o);
  ScalarJet& operator*=(const ScalarJet& o) { return *this = *this * o; }
  ScalarJet& operator+=(double s);
  ScalarJet& operator-=(double s);
  ScalarJet& operator*=(double s);
  ScalarJet& operator/=(double s);

  friend ScalarJet operator-(const ScalarJet& a);
  friend ScalarJet operator+(const ScalarJet& a, const ScalarJet& b);
  friend ScalarJet operator-(const ScalarJet& a, const ScalarJet& b);
  friend ScalarJet operator*(const ScalarJet& a, const ScalarJet& b);
  friend ScalarJet operator/(const ScalarJet& a, const ScalarJet& b);
  friend ScalarJet operator+(const ScalarJet& a, double s);
  friend ScalarJet operator+(double s, const ScalarJet& a) { return a + s; }
  friend ScalarJet operator-(const ScalarJet& a, double s) { return a + (-s); }
  friend ScalarJet operator-(double s, const ScalarJet& a) { return -a + s; }
  friend ScalarJet operator*(const ScalarJet& a, double s);
  friend ScalarJet operator*(double s, const ScalarJet& a) { return a * s; }
  friend ScalarJet operator/(const ScalarJet& a, double s);
  friend ScalarJet operator/(double s, const ScalarJet& a);

  // sum_j series[j] * (u - u(0))^j, truncated. The workhorse behind every
  // analytic function of a jet.
  friend ScalarJet compose_series(const ScalarJet& u, std::span<const double> series);

  friend ScalarJet sqrt(const ScalarJet& u);
  friend ScalarJet exp(const ScalarJet& u);
  friend ScalarJet log(const ScalarJet& u);
  friend ScalarJet sin(const ScalarJet& u);
  friend ScalarJet cos(const ScalarJet& u);
  friend ScalarJet sinh(const ScalarJet& u);
  friend ScalarJet cosh(const ScalarJet& u);

 private:
  ScalarJet(std::shared_ptr<const MultiIndexTable> tab, int valid);

  std::shared_ptr<const MultiIndexTable> tab_;
  int valid_ = -1;
  std::vector<double> c_;
};

// Vector-valued jet of a chart map, the boundary type between chart families
// and the geometry pipeline.
struct Jet {
  int dim_in = 0;
  int dim_out = 0;
  int order = 0;
  std::vector<double> base_point;
  std::vector<ScalarJet> comps;
};

using JetVec = std::vector<ScalarJet>;

// Pointwise helpers on component vectors.
JetVec jet_axpy(const ScalarJet& a, const JetVec& x, const JetVec& y);  // a*x + y
JetVec operator+(const JetVec& a, const JetVec& b);
JetVec operator-(const JetVec& a, const JetVec& b);
JetVec operator*(const ScalarJet& s, const JetVec& v);
JetVec operator*(double s, const JetVec& v);

double max_coeff_diff(const ScalarJet& a, const ScalarJet& b);

}  // namespace moebius
