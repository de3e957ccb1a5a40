#include "relbetti/rational.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

#include "relbetti/error.hpp"

namespace relbetti {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kMin64 = std::numeric_limits<int64_t>::min();
constexpr i128 kMax64 = std::numeric_limits<int64_t>::max();

bool fits64(i128 v) { return v > kMin64 && v <= kMax64; }

u128 uabs(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  if ((a >> 64) == 0 && (b >> 64) == 0) return std::gcd(uint64_t(a), uint64_t(b));
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from(i128 v) {
  u128 m = uabs(v);
  uint64_t limbs[2] = {uint64_t(m), uint64_t(m >> 64)};
  mpz_class z;
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(uint64_t), 0, 0, limbs);
  if (v < 0) z = -z;
  return z;
}

}  // namespace

Rational::Rational(int64_t n, int64_t d) {
  if (d == 0) throw ArithmeticError("rational with zero denominator");
  assign_wide(n, d);
}

Rational::Rational(const mpq_class& q) { assign_mpq(q); }

void Rational::assign_wide(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (d != 1) {
    u128 g = gcd128(uabs(n), u128(d));
    if (g > 1) {
      n /= i128(g);
      d /= i128(g);
    }
  }
  if (fits64(n) && fits64(d)) {
    num_ = int64_t(n);
    den_ = int64_t(d);
    big_.reset();
    return;
  }
  mpq_class q(mpz_from(n), mpz_from(d));
  num_ = 0;
  den_ = 1;
  big_ = std::make_unique<mpq_class>(std::move(q));
}

void Rational::assign_mpq(mpq_class q) {
  q.canonicalize();
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (n.fits_slong_p() && d.fits_slong_p() && n != std::numeric_limits<long>::min()) {
    num_ = n.get_si();
    den_ = d.get_si();
    big_.reset();
    return;
  }
  num_ = 0;
  den_ = 1;
  big_ = std::make_unique<mpq_class>(std::move(q));
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.front() == ' ' || s.front() == '+')) s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw ParseError("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ParseError("malformed rational literal '" + std::string(text) + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r;
  r.assign_mpq(std::move(q));
  return r;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q{mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_))};
  return q;
}

std::string Rational::to_string() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  Rational r(*this);
  if (r.big_) {
    *r.big_ = -*r.big_;
  } else if (r.num_ == std::numeric_limits<int64_t>::min()) {
    r.assign_wide(-i128(num_), den_);
  } else {
    r.num_ = -r.num_;
  }
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (o.num_ == 0) return *this;
    if (den_ == o.den_) {
      assign_wide(i128(num_) + o.num_, den_);
    } else {
      assign_wide(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    }
    return *this;
  }
  assign_mpq(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (o.num_ == 0) return *this;
    if (den_ == o.den_) {
      assign_wide(i128(num_) - o.num_, den_);
    } else {
      assign_wide(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    }
    return *this;
  }
  assign_mpq(to_mpq() - o.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (num_ == 0) return *this;
    if (o.num_ == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    if (den_ == 1 && o.den_ == 1) {
      i128 p = i128(num_) * o.num_;
      if (fits64(p)) {
        num_ = int64_t(p);
        return *this;
      }
    }
    // Cross-cancel first so the products are already reduced.
    int64_t g1 = std::gcd(num_, o.den_);
    int64_t g2 = std::gcd(o.num_, den_);
    i128 n = i128(num_ / g1) * (o.num_ / g2);
    i128 d = i128(den_ / g2) * (o.den_ / g1);
    if (fits64(n) && fits64(d)) {
      num_ = int64_t(n);
      den_ = int64_t(d);
    } else {
      assign_wide(n, d);
    }
    return *this;
  }
  assign_mpq(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw ArithmeticError("division by zero");
  if (!big_ && !o.big_) {
    if (num_ == 0) return *this;
    int64_t g1 = std::gcd(num_, o.num_);
    int64_t g2 = std::gcd(den_, o.den_);
    i128 n = i128(num_ / g1) * (o.den_ / g2);
    i128 d = i128(den_ / g2) * (o.num_ / g1);
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (fits64(n) && fits64(d)) {
      num_ = int64_t(n);
      den_ = int64_t(d);
    } else {
      assign_wide(n, d);
    }
    return *this;
  }
  assign_mpq(to_mpq() / o.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  // Canonical forms: a value that fits is never stored big.
  return false;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 l = i128(a.num_) * b.den_;
    i128 r = i128(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

}  // namespace relbetti
