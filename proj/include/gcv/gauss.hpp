#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

namespace gcv {

/// Exact element of Q(i): a pair of canonical GMP rationals.
class Gauss {
public:
  Gauss() = default;
  Gauss(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  Gauss(mpq_class re, mpq_class im = 0);

  static Gauss imaginary_unit() { return Gauss(0, 1); }
  /// Parses "3", "-2/5" as a real rational.
  static Gauss parse_rational(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Gauss conj() const { return Gauss(re_, -im_); }
  Gauss inverse() const;

  Gauss& operator+=(const Gauss& other);
  Gauss& operator-=(const Gauss& other);
  Gauss& operator*=(const Gauss& other);
  Gauss& operator/=(const Gauss& other);

  friend Gauss operator+(Gauss a, const Gauss& b) { return a += b; }
  friend Gauss operator-(Gauss a, const Gauss& b) { return a -= b; }
  friend Gauss operator*(Gauss a, const Gauss& b) { return a *= b; }
  friend Gauss operator/(Gauss a, const Gauss& b) { return a /= b; }
  Gauss operator-() const { return Gauss(-re_, -im_); }

  friend bool operator==(const Gauss& a, const Gauss& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Gauss& a, const Gauss& b) { return !(a == b); }

  /// Text in the s-expression number grammar: "3/4" or "(c 1/2 -3)".
  std::string str() const;

private:
  mpq_class re_{0};
  mpq_class im_{0};
};

std::ostream& operator<<(std::ostream& out, const Gauss& value);

}  // namespace gcv
