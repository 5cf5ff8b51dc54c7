#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

#include "aifv2/errors.hpp"

namespace aifv2 {

// Exact rational arithmetic on int64 numerator/denominator with __int128
// intermediates.  Values are kept normalized: gcd(num, den) == 1, den > 0,
// zero is 0/1.  A dedicated +infinity state (den == 0, num == 1) serves as
// the cost sentinel so optimization tables never need a "large value" hack.
// Any operation whose reduced result does not fit int64 throws OverflowError
// instead of silently wrapping.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  constexpr Rat(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  Rat(long long num, long long den) { assign(num, den); }

  static constexpr Rat infinity() {
    Rat r;
    r.num_ = 1;
    r.den_ = 0;
    return r;
  }

  bool is_infinite() const { return den_ == 0; }
  bool is_zero() const { return num_ == 0 && den_ != 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  long long num() const { return num_; }
  long long den() const { return den_; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    I128 n = I128(a.num_) * b.den_ + I128(b.num_) * a.den_;
    I128 d = I128(a.den_) * b.den_;
    return make_reduced(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    if (a.is_infinite()) {
      if (b.is_infinite()) throw OverflowError("rational: inf - inf");
      return infinity();
    }
    if (b.is_infinite()) throw OverflowError("rational: finite - inf");
    I128 n = I128(a.num_) * b.den_ - I128(b.num_) * a.den_;
    I128 d = I128(a.den_) * b.den_;
    return make_reduced(n, d);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    if (a.is_infinite() || b.is_infinite()) {
      const Rat& fin = a.is_infinite() ? b : a;
      if (fin.is_zero() || fin.is_negative())
        throw OverflowError("rational: inf * nonpositive");
      return infinity();
    }
    // Cross-reduce first so intermediates stay small in the common case.
    long long g1 = gcd64(a.num_, b.den_);
    long long g2 = gcd64(b.num_, a.den_);
    I128 n = I128(a.num_ / g1) * (b.num_ / g2);
    I128 d = I128(a.den_ / g2) * (b.den_ / g1);
    return make_reduced(n, d);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_infinite()) throw OverflowError("rational: divide by inf");
    if (b.is_zero()) throw OverflowError("rational: divide by zero");
    if (a.is_infinite()) {
      if (b.is_negative()) throw OverflowError("rational: inf / negative");
      return infinity();
    }
    long long g1 = gcd64(a.num_, b.num_);
    long long g2 = gcd64(b.den_, a.den_);
    I128 n = I128(a.num_ / g1) * (b.den_ / g2);
    I128 d = I128(a.den_ / g2) * (b.num_ / g1);
    return make_reduced(n, d);
  }
  Rat operator-() const {
    if (is_infinite()) throw OverflowError("rational: negate inf");
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    if (a.is_infinite()) return false;           // inf < x never
    if (b.is_infinite()) return true;            // finite < inf
    return I128(a.num_) * b.den_ < I128(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  Rat abs() const {
    if (is_infinite()) return infinity();
    return num_ < 0 ? -*this : *this;
  }

  double to_double() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Canonical text form: "inf", an integer ("3", "-1"), or "num/den" ("5/3").
  std::string to_string() const {
    if (is_infinite()) return "inf";
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

  // Parses "123", "-7", "0.25", "1/4", "3/2^3".  Throws InputError on any
  // other shape and OverflowError when the exact value does not fit.
  static Rat parse(const std::string& text);

 private:
  using I128 = __int128;

  static long long gcd64(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      long long t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  static I128 gcd128(I128 a, I128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      I128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  static Rat make_reduced(I128 n, I128 d) {
    if (d == 0) throw OverflowError("rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    I128 g = gcd128(n, d);
    n /= g;
    d /= g;
    constexpr I128 lo = std::numeric_limits<long long>::min();
    constexpr I128 hi = std::numeric_limits<long long>::max();
    if (n < lo || n > hi || d > hi)
      throw OverflowError("rational: value exceeds 64-bit range");
    Rat r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }

  void assign(long long num, long long den) {
    *this = make_reduced(I128(num), I128(den));
  }

  long long num_;
  long long den_;  // > 0 for finite values, 0 marks +infinity
};

inline Rat Rat::parse(const std::string& raw) {
  std::size_t b = raw.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) throw InputError("rational parse: empty string");
  std::size_t e = raw.find_last_not_of(" \t\r\n");
  const std::string text = raw.substr(b, e - b + 1);
  auto parse_int = [](const std::string& s) -> long long {
    if (s.empty()) throw InputError("rational parse: missing digits");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw InputError("rational parse: missing digits");
    I128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw InputError("rational parse: bad digit in '" + s + "'");
      v = v * 10 + (s[i] - '0');
      if (v > std::numeric_limits<long long>::max())
        throw OverflowError("rational parse: integer too large");
    }
    long long out = static_cast<long long>(v);
    return s[0] == '-' ? -out : out;
  };

  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    std::string ns = text.substr(0, slash);
    std::string ds = text.substr(slash + 1);
    long long num = parse_int(ns);
    // Denominator may be "2^k".
    std::size_t caret = ds.find('^');
    long long den;
    if (caret != std::string::npos) {
      long long base = parse_int(ds.substr(0, caret));
      long long exp = parse_int(ds.substr(caret + 1));
      if (base != 2 || exp < 0 || exp > 62)
        throw InputError("rational parse: only 2^k (0 <= k <= 62) powers supported");
      den = 1LL << exp;
    } else {
      den = parse_int(ds);
    }
    if (den == 0) throw InputError("rational parse: zero denominator");
    return Rat(num, den);
  }

  std::size_t dot = text.find('.');
  if (dot != std::string::npos) {
    std::string ip = text.substr(0, dot);
    std::string fp = text.substr(dot + 1);
    if (fp.empty()) throw InputError("rational parse: trailing dot");
    for (char c : fp)
      if (c < '0' || c > '9')
        throw InputError("rational parse: bad fraction digit");
    if (fp.size() > 18)
      throw OverflowError("rational parse: too many decimal places for exact mode");
    bool neg = !ip.empty() && ip[0] == '-';
    long long whole = ip.empty() || ip == "-" || ip == "+" ? 0 : parse_int(ip);
    I128 den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    I128 frac = 0;
    for (char c : fp) frac = frac * 10 + (c - '0');
    I128 n = I128(whole < 0 ? -whole : whole) * den + frac;
    if (neg || whole < 0) n = -n;
    return make_reduced(n, den);
  }

  return Rat(parse_int(text), 1);
}

}  // namespace aifv2
