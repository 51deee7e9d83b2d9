#include "tandem/rational.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace tandem {

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  // Avoid overflow on LLONG_MIN by working in unsigned space.
  unsigned long long mag =
      v < 0 ? ~static_cast<unsigned long long>(v) + 1ull
            : static_cast<unsigned long long>(v);
  while (mag > 0) {
    limbs_.push_back(static_cast<std::uint32_t>(mag % kBase));
    mag /= kBase;
  }
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  if (limbs_.empty()) sign_ = 0;
}

BigInt BigInt::from_decimal(std::string_view digits) {
  int sign = 1;
  std::size_t pos = 0;
  if (pos < digits.size() && (digits[pos] == '+' || digits[pos] == '-')) {
    sign = digits[pos] == '-' ? -1 : 1;
    ++pos;
  }
  if (pos >= digits.size())
    throw std::invalid_argument("BigInt: empty digit string");
  BigInt out;
  // Consume chunks of up to 9 digits, most significant first.
  std::size_t first_len = (digits.size() - pos) % kBaseDigits;
  if (first_len == 0) first_len = kBaseDigits;
  bool first = true;
  while (pos < digits.size()) {
    std::size_t len =
        first ? first_len : static_cast<std::size_t>(kBaseDigits);
    first = false;
    std::uint32_t chunk = 0;
    for (std::size_t i = 0; i < len; ++i) {
      char c = digits[pos + i];
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("BigInt: non-digit character");
      chunk = chunk * 10 + static_cast<std::uint32_t>(c - '0');
    }
    out = mul_small(out, kBase);
    out = out + BigInt(static_cast<long long>(chunk));
    pos += len;
  }
  if (!out.limbs_.empty()) out.sign_ = sign;
  out.trim();
  return out;
}

std::string BigInt::to_decimal() const {
  if (is_zero()) return "0";
  std::string out;
  if (sign_ < 0) out.push_back('-');
  out += std::to_string(limbs_.back());
  for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
    std::string part = std::to_string(limbs_[i]);
    out.append(kBaseDigits - part.size(), '0');
    out += part;
  }
  return out;
}

BigInt BigInt::operator-() const {
  BigInt out = *this;
  out.sign_ = -out.sign_;
  return out;
}

BigInt BigInt::abs() const {
  BigInt out = *this;
  if (out.sign_ < 0) out.sign_ = 1;
  return out;
}

int BigInt::compare_magnitude(const BigInt& a, const BigInt& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

std::vector<std::uint32_t> BigInt::add_magnitude(
    const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out(std::max(a.size(), b.size()) + 1, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t sum = carry;
    if (i < a.size()) sum += a[i];
    if (i < b.size()) sum += b[i];
    out[i] = static_cast<std::uint32_t>(sum % kBase);
    carry = sum / kBase;
  }
  return out;
}

std::vector<std::uint32_t> BigInt::sub_magnitude(
    const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out = a;
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::int64_t v = static_cast<std::int64_t>(out[i]) - borrow -
                     (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
    if (v < 0) {
      v += kBase;
      borrow = 1;
    } else {
      borrow = 0;
    }
    out[i] = static_cast<std::uint32_t>(v);
  }
  return out;
}

BigInt BigInt::operator+(const BigInt& rhs) const {
  if (is_zero()) return rhs;
  if (rhs.is_zero()) return *this;
  BigInt out;
  if (sign_ == rhs.sign_) {
    out.sign_ = sign_;
    out.limbs_ = add_magnitude(limbs_, rhs.limbs_);
  } else {
    int cmp = compare_magnitude(*this, rhs);
    if (cmp == 0) return BigInt();
    const BigInt& big = cmp > 0 ? *this : rhs;
    const BigInt& small = cmp > 0 ? rhs : *this;
    out.sign_ = big.sign_;
    out.limbs_ = sub_magnitude(big.limbs_, small.limbs_);
  }
  out.trim();
  return out;
}

BigInt BigInt::operator-(const BigInt& rhs) const { return *this + (-rhs); }

BigInt BigInt::operator*(const BigInt& rhs) const {
  if (is_zero() || rhs.is_zero()) return BigInt();
  BigInt out;
  out.sign_ = sign_ * rhs.sign_;
  out.limbs_.assign(limbs_.size() + rhs.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < rhs.limbs_.size() || carry; ++j) {
      std::uint64_t cur = out.limbs_[i + j] + carry;
      if (j < rhs.limbs_.size())
        cur += static_cast<std::uint64_t>(limbs_[i]) * rhs.limbs_[j];
      out.limbs_[i + j] = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
  }
  out.trim();
  return out;
}

BigInt BigInt::mul_small(const BigInt& a, std::uint32_t m) {
  if (a.is_zero() || m == 0) return BigInt();
  BigInt out;
  out.sign_ = a.sign_;
  out.limbs_ = a.limbs_;
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < out.limbs_.size() || carry; ++i) {
    if (i == out.limbs_.size()) out.limbs_.push_back(0);
    std::uint64_t cur =
        static_cast<std::uint64_t>(out.limbs_[i]) * m + carry;
    out.limbs_[i] = static_cast<std::uint32_t>(cur % kBase);
    carry = cur / kBase;
  }
  out.trim();
  return out;
}

void BigInt::divmod(const BigInt& lhs, const BigInt& rhs, BigInt& quotient,
                    BigInt& remainder) {
  if (rhs.is_zero()) throw std::domain_error("BigInt: division by zero");
  if (compare_magnitude(lhs, rhs) < 0) {
    quotient = BigInt();
    remainder = lhs;
    return;
  }
  BigInt denom = rhs.abs();
  // Schoolbook long division over limbs; each quotient limb is found by
  // binary search, which keeps the carry logic trivially correct.
  BigInt rem;
  std::vector<std::uint32_t> q(lhs.limbs_.size(), 0);
  for (std::size_t i = lhs.limbs_.size(); i-- > 0;) {
    rem = mul_small(rem, kBase) + BigInt(static_cast<long long>(lhs.limbs_[i]));
    std::uint32_t lo = 0, hi = kBase - 1, digit = 0;
    while (lo <= hi) {
      std::uint32_t mid = lo + (hi - lo) / 2;
      if (compare_magnitude(mul_small(denom, mid), rem) <= 0) {
        digit = mid;
        lo = mid + 1;
      } else {
        if (mid == 0) break;
        hi = mid - 1;
      }
    }
    q[i] = digit;
    rem = rem - mul_small(denom, digit);
  }
  quotient.limbs_ = std::move(q);
  quotient.sign_ = lhs.sign_ * rhs.sign_;
  quotient.trim();
  remainder = rem;
  if (!remainder.is_zero()) remainder.sign_ = lhs.sign_;
}

BigInt BigInt::operator/(const BigInt& rhs) const {
  BigInt q, r;
  divmod(*this, rhs, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& rhs) const {
  BigInt q, r;
  divmod(*this, rhs, q, r);
  return r;
}

bool BigInt::operator==(const BigInt& rhs) const {
  return sign_ == rhs.sign_ && limbs_ == rhs.limbs_;
}

std::strong_ordering BigInt::operator<=>(const BigInt& rhs) const {
  if (sign_ != rhs.sign_)
    return sign_ < rhs.sign_ ? std::strong_ordering::less
                             : std::strong_ordering::greater;
  int cmp = compare_magnitude(*this, rhs);
  if (sign_ < 0) cmp = -cmp;
  if (cmp < 0) return std::strong_ordering::less;
  if (cmp > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a = a.abs();
  b = b.abs();
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

BigInt BigInt::pow(const BigInt& base, unsigned exponent) {
  BigInt result(1);
  BigInt acc = base;
  while (exponent > 0) {
    if (exponent & 1u) result = result * acc;
    exponent >>= 1u;
    if (exponent) acc = acc * acc;
  }
  return result;
}

bool BigInt::fits_int64() const {
  static const BigInt kMin = BigInt::from_decimal("-9223372036854775808");
  static const BigInt kMax = BigInt::from_decimal("9223372036854775807");
  return *this >= kMin && *this <= kMax;
}

std::int64_t BigInt::to_int64() const {
  std::int64_t out = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;)
    out = out * kBase + limbs_[i];
  return sign_ < 0 ? -out : out;
}

Rational::Rational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  BigInt g = BigInt::gcd(num_, den_);
  num_ = num_ / g;
  den_ = den_ / g;
}

Rational Rational::from_decimal_string(std::string_view text) {
  std::string digits;
  digits.reserve(text.size());
  int sign = 1;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    sign = text[pos] == '-' ? -1 : 1;
    ++pos;
  }
  std::size_t frac_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("Rational: repeated point");
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("Rational: bad decimal character");
    seen_digit = true;
    digits.push_back(c);
    if (seen_point) ++frac_digits;
  }
  if (!seen_digit) throw std::invalid_argument("Rational: no digits");
  BigInt num = BigInt::from_decimal(digits);
  if (sign < 0) num = -num;
  BigInt den = BigInt::pow(BigInt(10), static_cast<unsigned>(frac_digits));
  return Rational(std::move(num), std::move(den));
}

bool Rational::is_integer() const { return den_ == BigInt(1); }

std::string Rational::to_string() const {
  if (is_integer()) return num_.to_decimal();
  // Decide whether den == 2^a * 5^b; if so the value has a finite decimal
  // expansion with exactly max(a, b) fractional digits.
  BigInt d = den_;
  unsigned twos = 0, fives = 0;
  const BigInt two(2), five(5), zero(0);
  while ((d % two) == zero) {
    d = d / two;
    ++twos;
  }
  while ((d % five) == zero) {
    d = d / five;
    ++fives;
  }
  if (d == BigInt(1)) {
    unsigned k = std::max(twos, fives);
    BigInt scale = BigInt::pow(two, k - twos) * BigInt::pow(five, k - fives);
    BigInt scaled = num_.abs() * scale;
    std::string digits = scaled.to_decimal();
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    digits.insert(digits.size() - k, ".");
    if (num_.sign() < 0) digits.insert(0, "-");
    return digits;
  }
  return num_.to_decimal() + "/" + den_.to_decimal();
}

Rational Rational::operator-() const {
  Rational out = *this;
  out.num_ = -out.num_;
  return out;
}

Rational Rational::operator+(const Rational& rhs) const {
  return Rational(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

Rational Rational::operator-(const Rational& rhs) const {
  return Rational(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
}

Rational Rational::operator*(const Rational& rhs) const {
  return Rational(num_ * rhs.num_, den_ * rhs.den_);
}

Rational Rational::operator/(const Rational& rhs) const {
  if (rhs.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(num_ * rhs.den_, den_ * rhs.num_);
}

Rational Rational::pow(const Rational& base, std::int64_t exponent) {
  if (exponent == 0) return Rational(1);
  bool invert = exponent < 0;
  if (invert && base.is_zero())
    throw std::domain_error("Rational: zero to a negative power");
  unsigned mag = static_cast<unsigned>(invert ? -exponent : exponent);
  Rational out(BigInt::pow(base.num_, mag), BigInt::pow(base.den_, mag));
  if (invert) out = Rational(1) / out;
  return out;
}

bool Rational::operator==(const Rational& rhs) const {
  return num_ == rhs.num_ && den_ == rhs.den_;
}

std::strong_ordering Rational::operator<=>(const Rational& rhs) const {
  return (num_ * rhs.den_) <=> (rhs.num_ * den_);
}

}  // namespace tandem
