#include "gcv/scalar.hpp"

#include <cstdint>
#include <stdexcept>

namespace gcv {

Scalar::Scalar(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.nvars(), Gauss(1))) {}

Scalar::Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.nvars() != den_.nvars()) throw std::invalid_argument("scalar arity mismatch");
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

Scalar Scalar::variable(std::size_t nvars, std::size_t index) {
  return Scalar(Poly::variable(nvars, index));
}

void Scalar::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.nvars(), Gauss(1));
    return;
  }
  if (!den_.is_constant()) {
    Poly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = *divide_exact(num_, g);
      den_ = *divide_exact(den_, g);
    }
  }
  make_den_monic();
}

void Scalar::make_den_monic() {
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.nvars(), Gauss(1));
    return;
  }
  if (!den_.leading_coeff().is_one()) {
    Gauss c = den_.leading_coeff().inverse();
    num_ = num_.scaled(c);
    den_ = den_.scaled(c);
  }
}

Gauss Scalar::constant_value() const {
  if (!is_constant()) throw std::logic_error("scalar is not constant");
  return num_.constant_term() / den_.constant_term();
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of the zero rational function");
  return Scalar(den_, num_);
}

Scalar Scalar::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  Scalar out;
  out.num_ = num_.pow(static_cast<unsigned>(k));
  out.den_ = den_.pow(static_cast<unsigned>(k));
  return out;
}

Scalar Scalar::derivative(std::size_t var) const {
  if (den_.is_constant()) return Scalar(num_.derivative(var), den_);
  Poly dd = den_.derivative(var);
  if (dd.is_zero()) return Scalar(num_.derivative(var), den_);
  // With g = gcd(den, den'), the quotient rule result reduces to
  // (num' * den/g - num * den'/g) / (den * den/g).
  Poly g = gcd(den_, dd);
  Poly dg = *divide_exact(den_, g);
  Poly top = num_.derivative(var) * dg - num_ * *divide_exact(dd, g);
  return Scalar(std::move(top), den_ * dg);
}

Scalar Scalar::conj() const { return Scalar(num_.conj(), den_.conj()); }

Scalar Scalar::permuted(const std::vector<std::size_t>& perm) const {
  return Scalar(num_.permuted(perm), den_.permuted(perm));
}

Gauss Scalar::evaluate(std::span<const Gauss> values) const {
  Gauss d = den_.evaluate(values);
  if (d.is_zero()) throw std::domain_error("evaluation at a pole");
  return num_.evaluate(values) / d;
}

namespace {

// Powers of each image, built on demand.
template <class T>
class PowerCache {
public:
  PowerCache(std::vector<T> base, T one) : one_(std::move(one)) {
    for (auto& b : base) powers_.push_back({std::move(b)});
  }
  const T& get(std::size_t var, std::uint32_t k) {
    auto& row = powers_[var];
    while (row.size() < k) row.push_back(row.back() * row.front());
    return row[k - 1];
  }
  const T& one() const { return one_; }

private:
  std::vector<std::vector<T>> powers_;
  T one_;
};

template <class T>
T substitute_with(const Poly& p, PowerCache<T>& cache) {
  T sum = cache.one() - cache.one();
  for (const auto& [e, c] : p.terms()) {
    T term = cache.one();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) term = term * cache.get(i, e[i]);
    }
    sum += term.scaled(c);
  }
  return sum;
}

}  // namespace

Scalar Scalar::substitute(std::span<const Scalar> images) const {
  if (images.size() != nvars()) throw std::invalid_argument("substitution arity mismatch");
  std::size_t out_vars = images.empty() ? 0 : images.front().nvars();
  bool polynomial = true;
  for (const auto& s : images) {
    if (s.nvars() != out_vars) throw std::invalid_argument("substitution images disagree");
    polynomial = polynomial && s.is_polynomial();
  }
  if (polynomial) {
    std::vector<Poly> base;
    for (const auto& s : images) base.push_back(s.num_.scaled(s.den_.constant_term().inverse()));
    PowerCache<Poly> cache(std::move(base), Poly::constant(out_vars, Gauss(1)));
    Poly top = substitute_with(num_, cache);
    Poly bottom = substitute_with(den_, cache);
    if (bottom.is_zero()) throw std::domain_error("substitution sends the denominator to zero");
    return Scalar(std::move(top), std::move(bottom));
  }
  PowerCache<Scalar> cache(std::vector<Scalar>(images.begin(), images.end()), Scalar(out_vars, Gauss(1)));
  Scalar top = substitute_with(num_, cache);
  Scalar bottom = substitute_with(den_, cache);
  if (bottom.is_zero()) throw std::domain_error("substitution sends the denominator to zero");
  return top / bottom;
}

Scalar& Scalar::operator+=(const Scalar& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (den_ == other.den_) {
    num_ += other.num_;
    normalize();
    return *this;
  }
  // Both operands are reduced, so only factors shared by the denominators
  // can survive in the sum.
  Poly g = gcd(den_, other.den_);
  if (g.is_one()) {
    num_ = num_ * other.den_ + other.num_ * den_;
    den_ = den_ * other.den_;
    make_den_monic();
    return *this;
  }
  Poly d1 = *divide_exact(den_, g);
  Poly d2 = *divide_exact(other.den_, g);
  num_ = num_ * d2 + other.num_ * d1;
  den_ = den_ * d2;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) { return *this += -other; }

Scalar& Scalar::operator*=(const Scalar& other) {
  if (is_zero() || other.is_zero()) {
    *this = Scalar(nvars() == 0 ? other.nvars() : nvars());
    return *this;
  }
  // Cross-cancel so the product of two reduced fractions stays reduced.
  Poly n1 = num_, d1 = den_, n2 = other.num_, d2 = other.den_;
  if (!d2.is_constant()) {
    Poly g = gcd(n1, d2);
    if (!g.is_one()) {
      n1 = *divide_exact(n1, g);
      d2 = *divide_exact(d2, g);
    }
  }
  if (!d1.is_constant()) {
    Poly g = gcd(n2, d1);
    if (!g.is_one()) {
      n2 = *divide_exact(n2, g);
      d1 = *divide_exact(d1, g);
    }
  }
  num_ = n1 * n2;
  den_ = d1 * d2;
  make_den_monic();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) { return *this *= other.inverse(); }

Scalar Scalar::operator-() const {
  Scalar out = *this;
  out.num_ = -num_;
  return out;
}

Scalar Scalar::scaled(const Gauss& c) const {
  if (c.is_zero()) return Scalar(nvars());
  Scalar out = *this;
  out.num_ = num_.scaled(c);
  return out;
}

}  // namespace gcv
