#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gcv/poly.hpp"

namespace gcv {

/// Rational function num/den over Q(i) in canonical form: gcd(num, den) = 1,
/// den monic in grlex order, and den = 1 whenever num = 0. Two Scalars are
/// equal exactly when their representations are identical.
class Scalar {
public:
  Scalar() : Scalar(std::size_t{0}) {}
  explicit Scalar(std::size_t nvars) : num_(nvars), den_(Poly::constant(nvars, Gauss(1))) {}
  Scalar(std::size_t nvars, const Gauss& c)
      : num_(Poly::constant(nvars, c)), den_(Poly::constant(nvars, Gauss(1))) {}
  explicit Scalar(Poly num);
  Scalar(Poly num, Poly den);

  static Scalar variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return num_.nvars(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// Value of a constant Scalar; throws otherwise.
  Gauss constant_value() const;

  Scalar inverse() const;
  Scalar pow(long k) const;
  Scalar derivative(std::size_t var) const;
  Scalar conj() const;
  Scalar permuted(const std::vector<std::size_t>& perm) const;

  /// Value at a point; throws std::domain_error at a pole.
  Gauss evaluate(std::span<const Gauss> values) const;
  /// Ring homomorphism sending variable i to images[i] (all images share one arity).
  Scalar substitute(std::span<const Scalar> images) const;

  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator/=(const Scalar& other);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;
  Scalar scaled(const Gauss& c) const;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
  void normalize();
  void make_den_monic();

  Poly num_;
  Poly den_;
};

}  // namespace gcv
