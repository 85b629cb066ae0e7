#include "moebius/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "moebius/errors.hpp"

namespace moebius {

namespace {

long long checked(__int128 v, const char* what) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw NumericError(std::string("rational overflow in ") + what);
  return static_cast<long long>(v);
}

}  // namespace

Rational::Rational(long long num) : num_(num), den_(1) {}

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
  if (den_ == 0) throw NumericError("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  long long g = std::gcd(std::llabs(num_), den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator-(const Rational& a) {
  Rational r;
  r.num_ = -a.num_;
  r.den_ = a.den_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  __int128 n = static_cast<__int128>(a.num_) * b.den_ +
               static_cast<__int128>(b.num_) * a.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return Rational(checked(n, "sum"), checked(d, "sum"));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  __int128 n = static_cast<__int128>(a.num_) * b.num_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  return Rational(checked(n, "product"), checked(d, "product"));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw NumericError("rational division by zero");
  __int128 n = static_cast<__int128>(a.num_) * b.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.num_;
  return Rational(checked(n, "quotient"), checked(d, "quotient"));
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ <
         static_cast<__int128>(b.num_) * a.den_;
}

bool Rational::parse(const std::string& text, Rational* out) {
  if (text.empty()) return false;
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      size_t p1 = 0, p2 = 0;
      long long n = std::stoll(text.substr(0, slash), &p1);
      long long d = std::stoll(text.substr(slash + 1), &p2);
      if (p1 != slash || p2 != text.size() - slash - 1 || d == 0) return false;
      *out = Rational(n, d);
      return true;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
      size_t p = 0;
      long long n = std::stoll(text, &p);
      if (p != text.size()) return false;
      *out = Rational(n);
      return true;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || frac_len > 15 || digits.empty() || digits == "-")
      return false;
    size_t p = 0;
    long long n = std::stoll(digits, &p);
    if (p != digits.size()) return false;
    long long d = 1;
    for (size_t i = 0; i < frac_len; ++i) d *= 10;
    *out = Rational(n, d);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

bool Rational::from_double_exact(double v, Rational* out) {
  if (!std::isfinite(v)) return false;
  double den = 1.0;
  // shift the binary fraction until integral; bail out once int64 would overflow
  while (v != std::floor(v)) {
    if (std::abs(v) > 4.6e18 || den > 4.6e18) return false;
    v *= 2.0;
    den *= 2.0;
  }
  if (std::abs(v) > 9.2e18 || den > 9.2e18) return false;
  *out = Rational(static_cast<long long>(v), static_cast<long long>(den));
  return true;
}

double QuadExt::to_double() const {
  return a_.to_double() + b_.to_double() * std::sqrt(d_.to_double());
}

Rational QuadExt::merge_radicand(const QuadExt& x, const QuadExt& y) {
  bool xr = !x.b_.is_zero() && !x.d_.is_zero();
  bool yr = !y.b_.is_zero() && !y.d_.is_zero();
  if (xr && yr && x.d_ != y.d_)
    throw NumericError("quadratic extension elements over different radicands");
  if (xr) return x.d_;
  if (yr) return y.d_;
  return Rational(0);
}

QuadExt operator-(const QuadExt& x) { return QuadExt(-x.a_, -x.b_, x.d_); }

QuadExt operator+(const QuadExt& x, const QuadExt& y) {
  Rational d = QuadExt::merge_radicand(x, y);
  return QuadExt(x.a_ + y.a_, x.b_ + y.b_, d);
}

QuadExt operator-(const QuadExt& x, const QuadExt& y) { return x + (-y); }

QuadExt operator*(const QuadExt& x, const QuadExt& y) {
  Rational d = QuadExt::merge_radicand(x, y);
  return QuadExt(x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, d);
}

}  // namespace moebius
