#include "relbetti/scalar.hpp"

#include "relbetti/error.hpp"

namespace relbetti {

GScalar& GScalar::operator/=(const GScalar& o) {
  if (o.is_zero()) throw ArithmeticError("division by zero");
  if (o.im.is_zero()) {
    re /= o.re;
    if (!im.is_zero()) im /= o.re;
    return *this;
  }
  Rational n = o.norm2();
  GScalar q = *this * o.conj();
  re = q.re / n;
  im = q.im / n;
  return *this;
}

std::string GScalar::to_string() const {
  if (im.is_zero()) return re.to_string();
  std::string imag;
  if (im.is_one()) {
    imag = "i";
  } else if (im == Rational(-1)) {
    imag = "-i";
  } else {
    imag = im.to_string() + "i";
  }
  if (re.is_zero()) return imag;
  if (imag[0] != '-') imag = "+" + imag;
  return re.to_string() + imag;
}

GScalar GScalar::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '(' && c != ')') s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty scalar literal");
  if (s.back() != 'i') return GScalar(Rational::parse(s));
  s.pop_back();
  // Split at the last sign that is not the leading one and not inside an
  // exponent-free rational (rationals here never contain signs after '/').
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    if (s[k] == '+' || s[k] == '-') {
      split = k;
      break;
    }
  }
  std::string real_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string imag_part = split == std::string::npos ? s : s.substr(split);
  Rational im_val;
  if (imag_part.empty() || imag_part == "+") {
    im_val = Rational(1);
  } else if (imag_part == "-") {
    im_val = Rational(-1);
  } else {
    im_val = Rational::parse(imag_part);
  }
  Rational re_val = real_part.empty() ? Rational(0) : Rational::parse(real_part);
  return GScalar(re_val, im_val);
}

}  // namespace relbetti
