#include "zombie/exact.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace zombie {

ExactNumber::ExactNumber(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw std::invalid_argument("ExactNumber: zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

ExactNumber ExactNumber::parse(const std::string& text) {
  mpq_class v;
  if (v.set_str(text, 10) != 0) throw std::invalid_argument("ExactNumber: cannot parse '" + text + "'");
  if (v.get_den() == 0) throw std::invalid_argument("ExactNumber: zero denominator");
  v.canonicalize();
  return ExactNumber(v);
}

ExactNumber& ExactNumber::operator/=(const ExactNumber& o) {
  if (o.is_zero()) throw std::domain_error("ExactNumber: division by zero");
  value_ /= o.value_;
  return *this;
}

std::string ExactNumber::to_fraction() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string ExactNumber::to_fixed(int places) const {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  // scaled = num * 10^places / den, rounded half to even
  const BigInt num = value_.get_num() * scale;
  const BigInt& den = value_.get_den();
  const bool negative = sgn(num) < 0;
  const BigInt abs_num = abs(num);
  BigInt q = abs_num / den;
  const BigInt r = abs_num - q * den;
  const int c = cmp(BigInt(2 * r), den);
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;

  std::string digits = q.get_str();
  if (places > 0) {
    if (static_cast<int>(digits.size()) <= places)
      digits.insert(0, static_cast<std::size_t>(places + 1) - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (negative && q != 0) digits.insert(0, "-");
  return digits;
}

std::ostream& operator<<(std::ostream& os, const ExactNumber& x) { return os << x.to_fraction(); }

ExactNumber pow(const ExactNumber& base, unsigned exponent) {
  ExactNumber result{1};
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

BigInt largest_integer_below(const ExactNumber& x) {
  // ceil(x) - 1
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), x.numerator().get_mpz_t(), x.denominator().get_mpz_t());
  return c - 1;
}

std::string format_fixed(double value, int places) {
  if (!std::isfinite(value)) return value > 0 ? "inf" : value < 0 ? "-inf" : "nan";
  mpq_class q(value);  // exact binary value
  return ExactNumber(q).to_fixed(places);
}

}  // namespace zombie
