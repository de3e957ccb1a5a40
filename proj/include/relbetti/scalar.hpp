#pragma once

#include <string>
#include <string_view>

#include "relbetti/rational.hpp"

namespace relbetti {

// Gaussian rational re + im*i.
struct GScalar {
  Rational re;
  Rational im;

  GScalar() = default;
  GScalar(int64_t r) : re(r) {}  // NOLINT(google-explicit-constructor)
  GScalar(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  GScalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GScalar i() { return GScalar(Rational(0), Rational(1)); }
  // Accepts "3/4", "-i", "2i", "1/2-3/5i", "(1+i)".
  static GScalar parse(std::string_view text);

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_one() const { return re.is_one() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  GScalar conj() const { return GScalar(re, -im); }
  // |z|^2 as a rational.
  Rational norm2() const { return re * re + im * im; }

  std::string to_string() const;

  GScalar operator-() const { return GScalar(-re, -im); }
  GScalar& operator+=(const GScalar& o) {
    re += o.re;
    if (!o.im.is_zero()) im += o.im;
    return *this;
  }
  GScalar& operator-=(const GScalar& o) {
    re -= o.re;
    if (!o.im.is_zero()) im -= o.im;
    return *this;
  }
  GScalar& operator*=(const GScalar& o);
  GScalar& operator/=(const GScalar& o);

  friend GScalar operator+(GScalar a, const GScalar& b) { return a += b; }
  friend GScalar operator-(GScalar a, const GScalar& b) { return a -= b; }
  friend GScalar operator*(GScalar a, const GScalar& b) { return a *= b; }
  friend GScalar operator/(GScalar a, const GScalar& b) { return a /= b; }
  friend bool operator==(const GScalar& a, const GScalar& b) { return a.re == b.re && a.im == b.im; }
};

inline GScalar& GScalar::operator*=(const GScalar& o) {
  if (im.is_zero() && o.im.is_zero()) {
    re *= o.re;
    return *this;
  }
  Rational r = re * o.re - im * o.im;
  Rational m = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(m);
  return *this;
}

}  // namespace relbetti
