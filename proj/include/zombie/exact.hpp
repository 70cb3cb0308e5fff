#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace zombie {

using BigInt = mpz_class;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator. All analytic probabilities and expectations are carried in
/// this type; doubles are derived views only.
class ExactNumber {
 public:
  ExactNumber() = default;
  ExactNumber(long value) : value_(value) {}  // NOLINT(runtime/explicit)
  ExactNumber(int value) : value_(value) {}   // NOLINT(runtime/explicit)
  ExactNumber(const BigInt& numerator, const BigInt& denominator);
  explicit ExactNumber(const mpq_class& value) : value_(value) { value_.canonicalize(); }

  /// Parses "n" or "n/d".
  static ExactNumber parse(const std::string& text);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  double to_double() const { return value_.get_d(); }

  /// "n/d", or "n" when the denominator is 1.
  std::string to_fraction() const;

  /// Decimal rendering with `places` digits, round-half-even on the exact value.
  std::string to_fixed(int places = 6) const;

  bool is_zero() const { return sgn(value_) == 0; }

  ExactNumber& operator+=(const ExactNumber& o) { value_ += o.value_; return *this; }
  ExactNumber& operator-=(const ExactNumber& o) { value_ -= o.value_; return *this; }
  ExactNumber& operator*=(const ExactNumber& o) { value_ *= o.value_; return *this; }
  ExactNumber& operator/=(const ExactNumber& o);

  friend ExactNumber operator+(ExactNumber a, const ExactNumber& b) { return a += b; }
  friend ExactNumber operator-(ExactNumber a, const ExactNumber& b) { return a -= b; }
  friend ExactNumber operator*(ExactNumber a, const ExactNumber& b) { return a *= b; }
  friend ExactNumber operator/(ExactNumber a, const ExactNumber& b) { return a /= b; }
  friend ExactNumber operator-(const ExactNumber& a) { return ExactNumber(mpq_class(-a.value_)); }

  friend bool operator==(const ExactNumber& a, const ExactNumber& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const ExactNumber& a, const ExactNumber& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactNumber& x);

 private:
  mpq_class value_{0};
};

/// base^exponent for a non-negative exponent.
ExactNumber pow(const ExactNumber& base, unsigned exponent);

/// Largest integer strictly below x.
BigInt largest_integer_below(const ExactNumber& x);

/// Rounds a double to `places` decimals with round-half-even on its binary value.
std::string format_fixed(double value, int places = 6);

}  // namespace zombie
