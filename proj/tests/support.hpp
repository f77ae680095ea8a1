#pragma once

#include <random>

#include "gcv/form.hpp"

namespace gcv::testing {

/// Seeded source of small random polynomial data.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Gauss gauss() {
    long den = integer(1, 3);
    return Gauss(mpq_class(integer(-4, 4), den), mpq_class(coin() ? integer(-2, 2) : 0, 1));
  }

  Poly poly(std::size_t nvars, int terms, std::uint32_t max_exp) {
    Poly p(nvars);
    for (int t = 0; t < terms; ++t) {
      Exponents e(nvars);
      for (auto& x : e) x = static_cast<std::uint32_t>(integer(0, max_exp));
      p.add_term(e, gauss());
    }
    return p;
  }

  Poly nonzero_poly(std::size_t nvars, int terms, std::uint32_t max_exp) {
    for (;;) {
      Poly p = poly(nvars, terms, max_exp);
      if (!p.is_zero()) return p;
    }
  }

  Scalar scalar(std::size_t nvars, bool rational) {
    Poly num = poly(nvars, 3, 2);
    if (!rational) return Scalar(num);
    return Scalar(num, nonzero_poly(nvars, 2, 1));
  }

  /// Low-degree polynomial, used where outputs get multiplied repeatedly.
  Scalar small_scalar(std::size_t nvars) { return Scalar(poly(nvars, 2, 1)); }

  /// Polynomial form with random components in the given degrees.
  Form form(const ChartPtr& chart, int degree, bool rational = false) {
    Form f(chart);
    Mask top = (Mask{1} << chart->dimension()) - 1;
    for (Mask m = 0; m <= top; ++m) {
      if (degree >= 0 && mask_degree(m) != degree) continue;
      if (integer(0, 2) == 0) continue;
      f.add(m, scalar(chart->num_vars(), rational));
    }
    return f;
  }

private:
  std::mt19937_64 rng_;
};

inline ChartPtr c2_chart() {
  return Chart::Builder("C2")
      .coordinate("x").coordinate("y").coordinate("u").coordinate("v")
      .complex_pair("w", "x", "y")
      .complex_pair("z", "u", "v")
      .build();
}

}  // namespace gcv::testing
