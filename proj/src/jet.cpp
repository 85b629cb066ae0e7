#include "moebius/jet.hpp"

#include <algorithm>
#include <cmath>

#include "moebius/errors.hpp"

namespace moebius {

namespace {

const std::shared_ptr<const MultiIndexTable>& require_same(const ScalarJet& a,
                                                           const ScalarJet& b,
                                                           const char* op) {
  if (!a.table() || !b.table() || a.table() != b.table())
    throw ConfigError(std::string("jet ") + op + ": operands use different tables");
  return a.table();
}

}  // namespace

ScalarJet::ScalarJet(std::shared_ptr<const MultiIndexTable> tab, int valid)
    : tab_(std::move(tab)), valid_(valid), c_(tab_->size(), 0.0) {}

ScalarJet ScalarJet::constant(std::shared_ptr<const MultiIndexTable> tab, double v) {
  ScalarJet j(std::move(tab), 0);
  j.valid_ = j.tab_->order();
  j.c_[0] = v;
  return j;
}

ScalarJet ScalarJet::variable(std::shared_ptr<const MultiIndexTable> tab, int var,
                              double base) {
  if (var < 0 || var >= tab->dim())
    throw ConfigError("jet variable index out of range");
  ScalarJet j(tab, tab->order());
  j.c_[0] = base;
  if (tab->order() >= 1) {
    std::vector<int> alpha(tab->dim(), 0);
    alpha[var] = 1;
    j.c_[tab->find(alpha)] = 1.0;
  }
  return j;
}

double ScalarJet::coeff(const std::vector<int>& alpha) const {
  int slot = tab_->find(alpha);
  if (slot < 0) throw JetOrderError("jet coefficient beyond table order");
  return coeff_slot(slot);
}

double ScalarJet::partial(const std::vector<int>& alpha) const {
  int slot = tab_->find(alpha);
  if (slot < 0) throw JetOrderError("jet partial beyond table order");
  return coeff_slot(slot) * tab_->factorial(slot);
}

double ScalarJet::coeff_slot(int slot) const {
  if (tab_->degree(slot) > valid_)
    throw JetOrderError("jet coefficient requested beyond valid order");
  return c_[slot];
}

ScalarJet ScalarJet::derivative(int var) const {
  if (valid_ < 1)
    throw JetOrderError("jet derivative: no valid coefficients would remain");
  ScalarJet out(tab_, valid_ - 1);
  for (int i = 0; i < tab_->size(); ++i) {
    if (tab_->degree(i) > valid_ - 1) break;
    int up = tab_->raise(i, var);
    if (up >= 0) out.c_[i] = c_[up] * (tab_->index(i)[var] + 1);
  }
  return out;
}

ScalarJet& ScalarJet::operator+=(const ScalarJet& o) {
  require_same(*this, o, "sum");
  valid_ = std::min(valid_, o.valid_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

ScalarJet& ScalarJet::operator-=(const ScalarJet& o) {
  require_same(*this, o, "difference");
  valid_ = std::min(valid_, o.valid_);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

ScalarJet& ScalarJet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

ScalarJet& ScalarJet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

ScalarJet& ScalarJet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

ScalarJet& ScalarJet::operator/=(double s) {
  for (double& v : c_) v /= s;
  return *this;
}

ScalarJet operator-(const ScalarJet& a) {
  ScalarJet out = a;
  for (double& v : out.c_) v = -v;
  return out;
}

ScalarJet operator+(const ScalarJet& a, const ScalarJet& b) {
  ScalarJet out = a;
  out += b;
  return out;
}

ScalarJet operator-(const ScalarJet& a, const ScalarJet& b) {
  ScalarJet out = a;
  out -= b;
  return out;
}

ScalarJet operator+(const ScalarJet& a, double s) {
  ScalarJet out = a;
  out += s;
  return out;
}

ScalarJet operator*(const ScalarJet& a, double s) {
  ScalarJet out = a;
  out *= s;
  return out;
}

ScalarJet operator/(const ScalarJet& a, double s) {
  ScalarJet out = a;
  out /= s;
  return out;
}

ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) {
  const auto& tab = require_same(a, b, "product");
  ScalarJet out(tab, std::min(a.valid_, b.valid_));
  const auto& pairs = tab->pairs();
  int end = tab->pairs_end(out.valid_);
  for (int k = 0; k < end; ++k) {
    const auto& p = pairs[k];
    out.c_[p.target] += a.c_[p.a] * b.c_[p.b];
  }
  return out;
}

ScalarJet compose_series(const ScalarJet& u, std::span<const double> series) {
  auto tab = u.tab_;
  int K = u.valid_;
  ScalarJet w = u;
  w.c_[0] = 0.0;  // nilpotent part
  ScalarJet acc = ScalarJet::constant(tab, series[K]);
  acc.valid_ = K;
  for (int j = K - 1; j >= 0; --j) {
    acc = acc * w;
    acc.c_[0] += series[j];
  }
  return acc;
}

ScalarJet operator/(double s, const ScalarJet& a) {
  double u0 = a.value();
  if (u0 == 0.0) throw NumericError("jet reciprocal at zero value");
  std::vector<double> series(a.valid_ + 1);
  double t = s / u0;
  for (int j = 0; j <= a.valid_; ++j) {
    series[j] = t;
    t = -t / u0;
  }
  return compose_series(a, series);
}

ScalarJet operator/(const ScalarJet& a, const ScalarJet& b) {
  require_same(a, b, "quotient");
  return a * (1.0 / b);
}

ScalarJet sqrt(const ScalarJet& u) {
  double u0 = u.value();
  if (u0 <= 0.0) throw NumericError("jet sqrt of non-positive value");
  std::vector<double> series(u.valid_ + 1);
  // binomial series around u0: C(1/2, j) u0^(1/2 - j)
  double coeff = std::sqrt(u0);
  for (int j = 0; j <= u.valid_; ++j) {
    series[j] = coeff;
    coeff *= (0.5 - j) / (j + 1) / u0;
  }
  return compose_series(u, series);
}

ScalarJet exp(const ScalarJet& u) {
  std::vector<double> series(u.valid_ + 1);
  double coeff = std::exp(u.value());
  for (int j = 0; j <= u.valid_; ++j) {
    series[j] = coeff;
    coeff /= (j + 1);
  }
  return compose_series(u, series);
}

ScalarJet log(const ScalarJet& u) {
  double u0 = u.value();
  if (u0 <= 0.0) throw NumericError("jet log of non-positive value");
  std::vector<double> series(u.valid_ + 1);
  series[0] = std::log(u0);
  double coeff = 1.0 / u0;
  for (int j = 1; j <= u.valid_; ++j) {
    series[j] = coeff / j;
    coeff = -coeff / u0;
  }
  return compose_series(u, series);
}

namespace {

ScalarJet trig_series(const ScalarJet& u, double even, double odd, bool flip) {
  // even/odd are f(u0) and f'(u0); flip toggles the sign pattern used by
  // circular functions (f'' = -f) versus hyperbolic ones (f'' = f).
  std::vector<double> series(u.valid_order() + 1);
  double fact = 1.0;
  double deriv[2] = {even, odd};
  double sign = 1.0;
  for (int j = 0; j <= u.valid_order(); ++j) {
    if (j > 0) fact *= j;
    series[j] = sign * deriv[j % 2] / fact;
    if (j % 2 == 1 && flip) sign = -sign;
  }
  return compose_series(u, series);
}

}  // namespace

ScalarJet sin(const ScalarJet& u) {
  return trig_series(u, std::sin(u.value()), std::cos(u.value()), true);
}

ScalarJet cos(const ScalarJet& u) {
  return trig_series(u, std::cos(u.value()), -std::sin(u.value()), true);
}

ScalarJet sinh(const ScalarJet& u) {
  return trig_series(u, std::sinh(u.value()), std::cosh(u.value()), false);
}

ScalarJet cosh(const ScalarJet& u) {
  return trig_series(u, std::cosh(u.value()), std::sinh(u.value()), false);
}

JetVec jet_axpy(const ScalarJet& a, const JetVec& x, const JetVec& y) {
  JetVec out;
  out.reserve(x.size());
  for (size_t i = 0; i < x.size(); ++i) out.push_back(a * x[i] + y[i]);
  return out;
}

JetVec operator+(const JetVec& a, const JetVec& b) {
  JetVec out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

JetVec operator-(const JetVec& a, const JetVec& b) {
  JetVec out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

JetVec operator*(const ScalarJet& s, const JetVec& v) {
  JetVec out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(s * c);
  return out;
}

JetVec operator*(double s, const JetVec& v) {
  JetVec out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c * s);
  return out;
}

double max_coeff_diff(const ScalarJet& a, const ScalarJet& b) {
  int valid = std::min(a.valid_order(), b.valid_order());
  double worst = 0.0;
  const auto& tab = *a.table();
  for (int i = 0; i < tab.size(); ++i) {
    if (tab.degree(i) > valid) break;
    worst = std::max(worst, std::abs(a.coeff_slot(i) - b.coeff_slot(i)));
  }
  return worst;
}

}  // namespace moebius
