#include "crsing/gauss_rational.hpp"

#include <ostream>

#include "crsing/errors.hpp"

namespace crs {

GaussRational::GaussRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussRational::GaussRational(long num, long den) {
  if (den == 0) throw ArithmeticError("zero denominator");
  re_ = mpq_class(num, den);
  re_.canonicalize();
}

GaussRational GaussRational::inverse() const {
  if (is_zero()) throw ArithmeticError("division by zero");
  if (is_real()) return GaussRational(1 / re_);
  mpq_class n = norm();
  return GaussRational(re_ / n, -im_ / n);
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (o.is_real()) {
    if (sgn(o.re_) == 0) throw ArithmeticError("division by zero");
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string GaussRational::to_string(bool parenthesize) const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_im) return re_.get_str();

  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = im_.get_str() + "*i";
  }
  if (!has_re) return imag;

  std::string out = re_.get_str();
  out += (sgn(im_) > 0 ? "+" : "") + imag;
  return parenthesize ? "(" + out + ")" : out;
}

std::ostream& operator<<(std::ostream& os, const GaussRational& q) { return os << q.to_string(); }

}  // namespace crs
