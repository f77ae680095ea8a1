#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gcv/gauss.hpp"

namespace gcv {

using Exponents = std::vector<std::uint32_t>;

std::uint32_t total_degree(const Exponents& e);

/// Graded-lexicographic order, largest first. Leading term = first map entry.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial over Q(i) in a fixed number of variables.
/// Zero coefficients are never stored.
class Poly {
public:
  using TermMap = std::map<Exponents, Gauss, GrlexGreater>;

  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Gauss& c);
  static Poly variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  Gauss constant_term() const;

  const Exponents& leading_exponents() const { return terms_.begin()->first; }
  const Gauss& leading_coeff() const { return terms_.begin()->second; }

  std::uint32_t degree_in(std::size_t var) const;
  std::uint32_t total_degree() const;
  bool contains(std::size_t var) const { return degree_in(var) > 0; }

  /// Coefficient of var^k as a polynomial free of var.
  Poly coeff_in(std::size_t var, std::uint32_t k) const;
  Poly derivative(std::size_t var) const;
  Poly conj() const;
  /// Renames variable i to perm[i]; perm must be a permutation of 0..nvars-1.
  Poly permuted(const std::vector<std::size_t>& perm) const;
  Poly times_var_power(std::size_t var, std::uint32_t k) const;
  Poly scaled(const Gauss& c) const;
  Poly monic() const;
  Poly pow(unsigned k) const;

  Gauss evaluate(std::span<const Gauss> values) const;
  Poly partial_evaluate(std::size_t var, const Gauss& value) const;

  void add_term(const Exponents& e, const Gauss& c);

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

/// lc(b)^(deg a - deg b + 1) * a mod b, both viewed as univariate in var.
Poly pseudo_remainder(const Poly& a, const Poly& b, std::size_t var);

/// Monic greatest common divisor (recursive primitive remainder sequences).
Poly gcd(const Poly& a, const Poly& b);

/// Monic gcd of the coefficients of a viewed as univariate in var.
Poly content_in(const Poly& a, std::size_t var);

}  // namespace gcv
