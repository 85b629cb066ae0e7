#pragma once

#include <cstdint>
#include <string>

namespace moebius {

// Exact fraction on int64 with __int128 intermediates. Inputs here are
// desk-scale (block dimensions, small radii), so fixed width is plenty;
// arithmetic that would overflow throws NumericError and callers fall back
// to floating point.
class Rational {
 public:
  Rational() = default;
  Rational(long long num);  // NOLINT(google-explicit-constructor)
  Rational(long long num, long long den);

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  double to_double() const;
  std::string str() const;

  friend Rational operator-(const Rational& a);
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  // Parses "3", "-5/2", or a finite decimal like "0.25" exactly.
  // Returns false on anything else.
  static bool parse(const std::string& text, Rational* out);

  // Exact conversion from a double whose binary fraction fits int64
  // (integers, quarters, ...). Returns false otherwise.
  static bool from_double_exact(double v, Rational* out);

 private:
  void normalize();
  long long num_ = 0;
  long long den_ = 1;
};

// Element a + b*sqrt(D) of a real quadratic extension, closed under the ring
// operations as long as every operand shares the same D. The parameter
// algebra lives here: coefficient triples are rational multiples of one
// square root, so identity residuals can be tested for exact zero.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(Rational a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QuadExt(Rational a, Rational b, Rational d) : a_(a), b_(b), d_(d) {}

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  const Rational& radicand() const { return d_; }
  bool is_zero() const { return a_.is_zero() && (b_.is_zero() || d_.is_zero()); }
  double to_double() const;

  friend QuadExt operator-(const QuadExt& x);
  friend QuadExt operator+(const QuadExt& x, const QuadExt& y);
  friend QuadExt operator-(const QuadExt& x, const QuadExt& y);
  friend QuadExt operator*(const QuadExt& x, const QuadExt& y);

 private:
  static Rational merge_radicand(const QuadExt& x, const QuadExt& y);
  Rational a_, b_, d_;
};

}  // namespace moebius
