#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "dgplab/errors.hpp"

namespace dgplab {

/// Exact rational with 64-bit numerator and denominator; always reduced, den > 0.
/// Overflow throws NumericError rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) { set(num, den); }

  /// Parses "p", "p/q" or a finite decimal such as "3.25".
  static Rational parse(const std::string& s);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw NumericError("rational: division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  friend std::ostream& operator<<(std::ostream& o, const Rational& r) { return o << r.str(); }

 private:
  void set(std::int64_t num, std::int64_t den) {
    if (den == 0) throw NumericError("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static Rational from_wide(__int128 num, __int128 den) {
    if (den == 0) throw NumericError("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num, b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    const __int128 g = a == 0 ? 1 : a;
    num /= g;
    den /= g;
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (num > lim || num < -lim || den > lim) throw NumericError("rational: 64-bit overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw ConfigError("rational: empty string");
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
      std::size_t used = 0;
      const auto v = std::stoll(s, &used);
      if (used != s.size()) throw ConfigError("rational: cannot parse '" + s + "'");
      return Rational(v);
    }
    const std::string frac = s.substr(dot + 1);
    if (frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError("rational: cannot parse '" + s + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string whole = s.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    return Rational(w) + Rational(neg ? -f : f, scale);
  } catch (const std::logic_error&) {
    throw ConfigError("rational: cannot parse '" + s + "'");
  }
}

}  // namespace dgplab
