#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gridrisk/errors.hpp"

namespace gridrisk {

/// Exact rational on int64 numerator/denominator. Always normalized:
/// denominator > 0, gcd(|num|, den) == 1. Intermediates use __int128;
/// results that no longer fit int64 throw std::overflow_error. Score
/// arithmetic in this library stays tiny (|values| <= 1000 with small
/// denominators), so overflow indicates misuse rather than a data case.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) {
      throw std::domain_error("rational with zero denominator");
    }
    __int128 n = numerator;
    __int128 d = denominator;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    assign(n, d);
  }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  /// Parses "3", "-4", "6.4", "0.35", or "5/7".
  static Rational parse(std::string_view text) {
    auto fail = [&] {
      throw ParseError("invalid rational: '" + std::string(text) + "'");
    };
    if (text.empty()) fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      std::int64_t n = parse_int(text.substr(0, slash), fail);
      std::int64_t d = parse_int(text.substr(slash + 1), fail);
      if (d == 0) fail();
      return Rational(n, d);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view head = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      if (frac.empty() || frac.size() > 18) fail();
      bool negative = !head.empty() && head.front() == '-';
      if (negative || (!head.empty() && head.front() == '+')) {
        head.remove_prefix(1);
      }
      std::int64_t whole = head.empty() ? 0 : parse_int(head, fail);
      std::int64_t digits = parse_int(frac, fail);
      if (digits < 0) fail();
      std::int64_t scale = 1;
      for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rational value = Rational(whole) * Rational(scale) + Rational(digits);
      value = value / Rational(scale);
      return negative ? -value : value;
    }
    return Rational(parse_int(text, fail));
  }

  /// "p/q" when fractional, plain integer otherwise. Lossless.
  std::string str() const {
    std::string out = std::to_string(num_);
    if (den_ != 1) {
      out += '/';
      out += std::to_string(den_);
    }
    return out;
  }

  friend Rational operator-(const Rational& r) {
    Rational out;
    out.num_ = checked(-static_cast<__int128>(r.num_));
    out.den_ = r.den_;
    return out;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ +
                 static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    Rational out;
    out.assign(n, d);
    return out;
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + (-b);
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.num_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    Rational out;
    out.assign(n, d);
    return out;
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    __int128 n = static_cast<__int128>(a.num_) * b.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.num_;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    Rational out;
    out.assign(n, d);
    return out;
  }

  Rational& operator+=(const Rational& other) { return *this = *this + other; }
  Rational& operator-=(const Rational& other) { return *this = *this - other; }
  Rational& operator*=(const Rational& other) { return *this = *this * other; }
  Rational& operator/=(const Rational& other) { return *this = *this / other; }

  friend bool operator==(const Rational& a, const Rational& b) = default;

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  template <typename Fail>
  static std::int64_t parse_int(std::string_view text, Fail fail) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail();
    return value;
  }

  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
      throw std::overflow_error("rational overflow");
    }
    return static_cast<std::int64_t>(v);
  }

  void assign(__int128 n, __int128 d) {
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = checked(n);
    den_ = checked(d);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Nearest integer, ties to the even integer.
inline std::int64_t round_half_even(const Rational& r) {
  std::int64_t num = r.numerator();
  std::int64_t den = r.denominator();
  std::int64_t q = num / den;
  std::int64_t rem = num % den;
  if (rem < 0) {  // floor division
    q -= 1;
    rem += den;
  }
  __int128 twice = static_cast<__int128>(rem) * 2;
  if (twice > den) return q + 1;
  if (twice < den) return q;
  return (q % 2 == 0) ? q : q + 1;
}

/// Deterministic decimal rendering:
///   - integers print with no fractional part ("567");
///   - terminating decimals print exactly and minimally ("6.4", "8.25");
///   - everything else rounds half-even to 4 fractional digits ("37.7143").
inline std::string format_decimal(const Rational& r) {
  if (r.is_integer()) return std::to_string(r.numerator());
  std::int64_t den = r.denominator();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  bool negative = r.numerator() < 0;
  std::int64_t scaled = 0;
  int digits = 0;
  if (den == 1 && twos <= 18 && fives <= 18) {
    digits = twos > fives ? twos : fives;
    __int128 pow10 = 1;
    for (int i = 0; i < digits; ++i) pow10 *= 10;
    __int128 value = static_cast<__int128>(r.numerator()) * pow10 /
                     r.denominator();
    scaled = static_cast<std::int64_t>(negative ? -value : value);
  } else {
    digits = 4;
    scaled = round_half_even(r * Rational(10000));
    if (negative) scaled = -scaled;
  }
  std::int64_t pow10 = 1;
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  std::string frac = std::to_string(scaled % pow10);
  frac.insert(frac.begin(), static_cast<size_t>(digits) - frac.size(), '0');
  std::string out = negative ? "-" : "";
  out += std::to_string(scaled / pow10);
  out += '.';
  out += frac;
  return out;
}

}  // namespace gridrisk
