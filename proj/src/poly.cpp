#include "gcv/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace gcv {

std::uint32_t total_degree(const Exponents& e) {
  std::uint32_t d = 0;
  for (auto x : e) d += x;
  return d;
}

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
  auto da = total_degree(a);
  auto db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Poly Poly::constant(std::size_t nvars, const Gauss& c) {
  Poly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("variable index out of range");
  Poly p(nvars);
  Exponents e(nvars, 0);
  e[index] = 1;
  p.add_term(e, Gauss(1));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && gcv::total_degree(terms_.begin()->first) == 0);
}

bool Poly::is_one() const { return is_constant() && !is_zero() && leading_coeff().is_one(); }

Gauss Poly::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Gauss(0) : it->second;
}

std::uint32_t Poly::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

std::uint32_t Poly::total_degree() const {
  return terms_.empty() ? 0 : gcv::total_degree(terms_.begin()->first);
}

Poly Poly::coeff_in(std::size_t var, std::uint32_t k) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] != k) continue;
    Exponents f = e;
    f[var] = 0;
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

Poly Poly::derivative(std::size_t var) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    f[var] -= 1;
    out.add_term(f, c * Gauss(static_cast<long>(e[var])));
  }
  return out;
}

Poly Poly::conj() const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.conj());
  return out;
}

Poly Poly::permuted(const std::vector<std::size_t>& perm) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents f(nvars_, 0);
    for (std::size_t i = 0; i < nvars_; ++i) f[perm[i]] = e[i];
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

Poly Poly::times_var_power(std::size_t var, std::uint32_t k) const {
  if (k == 0) return *this;
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f[var] += k;
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

Poly Poly::scaled(const Gauss& c) const {
  if (c.is_zero()) return Poly(nvars_);
  Poly out(nvars_);
  for (const auto& [e, d] : terms_) out.terms_.emplace(e, d * c);
  return out;
}

Poly Poly::monic() const {
  if (is_zero() || leading_coeff().is_one()) return *this;
  return scaled(leading_coeff().inverse());
}

Poly Poly::pow(unsigned k) const {
  Poly result = constant(nvars_, Gauss(1));
  Poly base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

Gauss Poly::evaluate(std::span<const Gauss> values) const {
  if (values.size() != nvars_) throw std::invalid_argument("evaluation point has wrong arity");
  Gauss sum(0);
  for (const auto& [e, c] : terms_) {
    Gauss term = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) term *= values[i];
    }
    sum += term;
  }
  return sum;
}

Poly Poly::partial_evaluate(std::size_t var, const Gauss& value) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    Gauss term = c;
    for (std::uint32_t k = 0; k < e[var]; ++k) term *= value;
    Exponents f = e;
    f[var] = 0;
    out.add_term(f, term);
  }
  return out;
}

void Poly::add_term(const Exponents& e, const Gauss& c) {
  if (c.is_zero()) return;
  if (e.size() != nvars_) throw std::invalid_argument("monomial arity mismatch");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

static void check_arity(const Poly& a, const Poly& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("polynomial arity mismatch");
}

Poly& Poly::operator+=(const Poly& other) {
  check_arity(*this, other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  check_arity(*this, other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  check_arity(a, b);
  Poly out(a.nvars());
  Exponents f(a.nvars());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = ea[i] + eb[i];
      out.add_term(f, ca * cb);
    }
  }
  return out;
}

Poly Poly::operator-() const { return scaled(Gauss(-1)); }

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  check_arity(a, b);
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  Poly quotient(a.nvars());
  Poly rem = a;
  const auto& lb = b.leading_exponents();
  Gauss lb_inv = b.leading_coeff().inverse();
  Exponents shift(a.nvars());
  while (!rem.is_zero()) {
    const auto& lr = rem.leading_exponents();
    for (std::size_t i = 0; i < shift.size(); ++i) {
      if (lr[i] < lb[i]) return std::nullopt;
      shift[i] = lr[i] - lb[i];
    }
    Gauss c = rem.leading_coeff() * lb_inv;
    Poly step(a.nvars());
    step.add_term(shift, c);
    quotient += step;
    rem -= step * b;
  }
  return quotient;
}

Poly pseudo_remainder(const Poly& a, const Poly& b, std::size_t var) {
  std::uint32_t n = b.degree_in(var);
  std::uint32_t m = a.degree_in(var);
  Poly lcb = b.coeff_in(var, n);
  Poly r = a;
  if (m < n) return r;
  std::uint32_t steps = 0;
  while (!r.is_zero()) {
    std::uint32_t d = r.degree_in(var);
    if (d < n) break;
    Poly lcr = r.coeff_in(var, d);
    r = lcb * r - (lcr * b).times_var_power(var, d - n);
    ++steps;
  }
  // Normalize to the textbook multiplier lc(b)^(m-n+1).
  if (steps < m - n + 1) r = r * lcb.pow(m - n + 1 - steps);
  return r;
}

namespace {

std::optional<std::size_t> highest_var(const Poly& a, const Poly& b) {
  for (std::size_t v = a.nvars(); v-- > 0;) {
    if (a.contains(v) || b.contains(v)) return v;
  }
  return std::nullopt;
}

Poly exact(const Poly& a, const Poly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("expected exact polynomial division");
  return *q;
}

Poly primitive_part(const Poly& a, std::size_t var) {
  if (a.is_zero()) return a;
  return exact(a, content_in(a, var)).monic();
}

// Dense univariate polynomial over Q(i), lowest degree first.
using Dense = std::vector<Gauss>;

void trim(Dense& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

std::size_t dense_gcd_degree(Dense a, Dense b) {
  trim(a);
  trim(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    Gauss inv = b.back().inverse();
    while (a.size() >= b.size() && !a.empty()) {
      Gauss q = a.back() * inv;
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

Dense specialize(const Poly& p, std::size_t var, std::span<const Gauss> point) {
  Dense out(p.degree_in(var) + 1);
  for (const auto& [e, c] : p.terms()) {
    Gauss term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i == var) continue;
      for (std::uint32_t k = 0; k < e[i]; ++k) term *= point[i];
    }
    out[e[var]] += term;
  }
  return out;
}

// True when a and b provably share no factor involving var: their images
// under a specialization that keeps both leading coefficients alive have a
// constant gcd. A false answer is inconclusive.
bool coprime_in(const Poly& a, const Poly& b, std::size_t var) {
  Poly lca = a.coeff_in(var, a.degree_in(var));
  Poly lcb = b.coeff_in(var, b.degree_in(var));
  std::vector<Gauss> point(a.nvars());
  for (long attempt = 0; attempt < 4; ++attempt) {
    for (std::size_t i = 0; i < point.size(); ++i) {
      point[i] = Gauss(static_cast<long>(2 + 3 * i + 7 * attempt), static_cast<long>(attempt % 2));
    }
    if (lca.evaluate(point).is_zero() || lcb.evaluate(point).is_zero()) continue;
    return dense_gcd_degree(specialize(a, var, point), specialize(b, var, point)) == 0;
  }
  return false;
}

}  // namespace

Poly content_in(const Poly& a, std::size_t var) {
  Poly g(a.nvars());
  for (std::uint32_t k = 0, d = a.degree_in(var); k <= d; ++k) {
    Poly c = a.coeff_in(var, k);
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

Poly gcd(const Poly& a, const Poly& b) {
  check_arity(a, b);
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly::constant(a.nvars(), Gauss(1));
  if (a == b) return a.monic();
  if (a.size() == 1 || b.size() == 1) {
    Exponents e = a.size() == 1 ? a.leading_exponents() : b.leading_exponents();
    for (const auto* p : {&a, &b}) {
      for (const auto& [f, c] : p->terms()) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], f[i]);
      }
    }
    Poly m(a.nvars());
    m.add_term(e, Gauss(1));
    return m;
  }

  std::size_t v = *highest_var(a, b);
  if (!a.contains(v)) return gcd(a, content_in(b, v));
  if (!b.contains(v)) return gcd(content_in(a, v), b);

  Poly ca = content_in(a, v);
  Poly cb = content_in(b, v);
  Poly c = gcd(ca, cb);
  Poly r0 = exact(a, ca);
  Poly r1 = exact(b, cb);
  if (r0.degree_in(v) < r1.degree_in(v)) std::swap(r0, r1);
  if (coprime_in(r0, r1, v)) return c;

  // Subresultant remainder sequence: keeps coefficients in the polynomial
  // ring without per-step content extraction.
  Poly g = Poly::constant(a.nvars(), Gauss(1));
  Poly h = g;
  for (;;) {
    std::uint32_t delta = r0.degree_in(v) - r1.degree_in(v);
    Poly r = pseudo_remainder(r0, r1, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) return c.monic();
    r0 = std::move(r1);
    r1 = exact(r, g * h.pow(delta));
    g = r0.coeff_in(v, r0.degree_in(v));
    if (delta == 0) continue;
    h = delta == 1 ? g : exact(g.pow(delta), h.pow(delta - 1));
  }
  return (c * primitive_part(r1, v)).monic();
}

}  // namespace gcv
