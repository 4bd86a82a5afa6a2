#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "ordermech/error.hpp"

namespace ordermech {

/// Exact rational payoff. Every payment, cost, profit and welfare value in
/// the library is a Money, so equality comparisons are exact.
class Money {
 public:
  Money() = default;

  template <std::integral T>
  Money(T value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)

  Money(long numerator, long denominator) {
    if (denominator == 0) throw DomainError("Money: zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }

  explicit Money(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

  /// Parses "p/q", "p" or a terminating decimal such as "-0.25".
  static Money parse(std::string_view text) {
    std::string s(text);
    auto trimmed_begin = s.find_first_not_of(" \t");
    auto trimmed_end = s.find_last_not_of(" \t");
    if (trimmed_begin == std::string::npos) throw ParseError("empty rational");
    s = s.substr(trimmed_begin, trimmed_end - trimmed_begin + 1);

    auto dot = s.find('.');
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw ParseError("malformed rational '" + s + "'");
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::size_t places = s.size() - dot - 1;
      if (places == 0 || !valid_integer(digits)) throw ParseError("malformed rational '" + s + "'");
      mpz_class num(strip_plus(digits), 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
      return Money(mpq_class(num, den));
    }

    auto slash = s.find('/');
    std::string num_text = s.substr(0, slash);
    std::string den_text = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_integer(num_text) || !valid_integer(den_text) || den_text.starts_with('-') ||
        den_text.starts_with('+')) {
      throw ParseError("malformed rational '" + s + "'");
    }
    mpz_class den(den_text, 10);
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Money(mpq_class(mpz_class(strip_plus(num_text), 10), den));
  }

  /// Canonical "p/q" form; integers print without the denominator.
  [[nodiscard]] std::string str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  /// Exact decimal when the expansion terminates, otherwise "p/q".
  [[nodiscard]] std::string decimal() const {
    if (is_integer()) return str();
    mpz_class den = value_.get_den();
    unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(2).get_mpz_t());
    unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(5).get_mpz_t());
    if (den != 1) return str();

    unsigned long places = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = abs(value_.get_num()) * scale / value_.get_den();
    std::string digits = scaled.get_str();
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    return (sgn(value_) < 0 ? "-" : "") + digits;
  }

  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  Money& operator+=(const Money& o) {
    value_ += o.value_;
    return *this;
  }
  Money& operator-=(const Money& o) {
    value_ -= o.value_;
    return *this;
  }
  Money& operator*=(const Money& o) {
    value_ *= o.value_;
    return *this;
  }
  Money& operator/=(const Money& o) {
    if (o.sign() == 0) throw DomainError("Money: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Money operator+(Money a, const Money& b) { return a += b; }
  friend Money operator-(Money a, const Money& b) { return a -= b; }
  friend Money operator*(Money a, const Money& b) { return a *= b; }
  friend Money operator/(Money a, const Money& b) { return a /= b; }
  friend Money operator-(const Money& a) { return Money(mpq_class(-a.value_)); }

  friend bool operator==(const Money& a, const Money& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Money& a, const Money& b) {
    int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Money& m) { return os << m.str(); }

 private:
  static std::string strip_plus(const std::string& s) { return s.starts_with('+') ? s.substr(1) : s; }

  static bool valid_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  }

  mpq_class value_{0};
};

}  // namespace ordermech
