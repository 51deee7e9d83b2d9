#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tandem {

/// Arbitrary-precision signed integer. Magnitude is stored as base-1e9
/// limbs, little-endian, with no leading zero limbs; a zero value has an
/// empty limb vector and sign 0.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);  // NOLINT(google-explicit-constructor)

  /// Parses an optionally signed run of decimal digits ("-00123" is fine).
  /// Throws std::invalid_argument on anything else.
  static BigInt from_decimal(std::string_view digits);

  std::string to_decimal() const;

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool is_odd() const { return sign_ != 0 && (limbs_[0] & 1u); }

  BigInt operator-() const;
  BigInt abs() const;

  BigInt operator+(const BigInt& rhs) const;
  BigInt operator-(const BigInt& rhs) const;
  BigInt operator*(const BigInt& rhs) const;

  /// Truncating division: quotient rounds toward zero, remainder takes the
  /// sign of the dividend. Throws std::domain_error when rhs is zero.
  static void divmod(const BigInt& lhs, const BigInt& rhs, BigInt& quotient,
                     BigInt& remainder);
  BigInt operator/(const BigInt& rhs) const;
  BigInt operator%(const BigInt& rhs) const;

  bool operator==(const BigInt& rhs) const;
  std::strong_ordering operator<=>(const BigInt& rhs) const;

  static BigInt gcd(BigInt a, BigInt b);
  static BigInt pow(const BigInt& base, unsigned exponent);

  /// Value of the low 64 bits of the magnitude, with sign applied; only
  /// meaningful when fits_int64() holds.
  bool fits_int64() const;
  std::int64_t to_int64() const;

 private:
  static constexpr std::uint32_t kBase = 1'000'000'000u;
  static constexpr int kBaseDigits = 9;

  int sign_ = 0;
  std::vector<std::uint32_t> limbs_;

  void trim();
  static int compare_magnitude(const BigInt& a, const BigInt& b);
  static std::vector<std::uint32_t> add_magnitude(
      const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
  // Requires |a| >= |b|.
  static std::vector<std::uint32_t> sub_magnitude(
      const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
  static BigInt mul_small(const BigInt& a, std::uint32_t m);
};

/// Exact rational with invariant den > 0 and gcd(|num|, den) == 1; zero is
/// stored as 0/1. This is the value type behind every answer comparison.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT
  Rational(BigInt numerator, BigInt denominator);

  /// Exact value of a plain decimal string, e.g. "1234.5" -> 2469/2.
  /// Accepts an optional leading sign; no commas, no exponent.
  static Rational from_decimal_string(std::string_view text);

  /// Canonical render: integer when den == 1, exact decimal when den is of
  /// the form 2^a * 5^b, otherwise "num/den". parse_number() round-trips
  /// every form this emits.
  std::string to_string() const;

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }
  bool is_integer() const;
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  Rational operator-() const;
  Rational operator+(const Rational& rhs) const;
  Rational operator-(const Rational& rhs) const;
  Rational operator*(const Rational& rhs) const;
  /// Throws std::domain_error on division by zero.
  Rational operator/(const Rational& rhs) const;

  /// Integer power with |exponent| expected small (callers enforce their own
  /// bounds); negative exponents invert, so base 0 with exponent < 0 throws
  /// std::domain_error.
  static Rational pow(const Rational& base, std::int64_t exponent);

  bool operator==(const Rational& rhs) const;
  std::strong_ordering operator<=>(const Rational& rhs) const;

 private:
  BigInt num_;
  BigInt den_;

  void normalize();
};

}  // namespace tandem
