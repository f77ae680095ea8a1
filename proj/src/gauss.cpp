#include "gcv/gauss.hpp"

#include <ostream>
#include <stdexcept>

namespace gcv {

Gauss::Gauss(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

Gauss Gauss::parse_rational(std::string_view text) {
  mpq_class value;
  if (value.set_str(std::string(text), 10) != 0) {
    throw std::invalid_argument("not a rational literal: " + std::string(text));
  }
  if (sgn(value.get_den()) == 0) {
    throw std::invalid_argument("zero denominator in literal: " + std::string(text));
  }
  value.canonicalize();
  return Gauss(value);
}

Gauss Gauss::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero in Q(i)");
  mpq_class norm = re_ * re_ + im_ * im_;
  return Gauss(re_ / norm, -im_ / norm);
}

Gauss& Gauss::operator+=(const Gauss& other) {
  re_ += other.re_;
  im_ += other.im_;
  return *this;
}

Gauss& Gauss::operator-=(const Gauss& other) {
  re_ -= other.re_;
  im_ -= other.im_;
  return *this;
}

Gauss& Gauss::operator*=(const Gauss& other) {
  if (sgn(other.im_) == 0) {
    re_ *= other.re_;
    im_ *= other.re_;
    return *this;
  }
  if (sgn(im_) == 0) {
    im_ = re_ * other.im_;
    re_ *= other.re_;
    return *this;
  }
  mpq_class re = re_ * other.re_ - im_ * other.im_;
  mpq_class im = re_ * other.im_ + im_ * other.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Gauss& Gauss::operator/=(const Gauss& other) { return *this *= other.inverse(); }

std::string Gauss::str() const {
  if (is_real()) return re_.get_str();
  return "(c " + re_.get_str() + " " + im_.get_str() + ")";
}

std::ostream& operator<<(std::ostream& out, const Gauss& value) { return out << value.str(); }

}  // namespace gcv
