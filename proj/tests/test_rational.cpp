#include <doctest.h>
#include <gmpxx.h>

#include "tandem/backend.hpp"
#include "tandem/rational.hpp"

using tandem::BigInt;
using tandem::Rational;

TEST_CASE("BigInt decimal round trip") {
  for (const char* s : {"0", "1", "-1", "999999999", "1000000000",
                        "-123456789012345678901234567890", "00000000012"}) {
    BigInt v = BigInt::from_decimal(s);
    mpz_class ref(s);
    CHECK(v.to_decimal() == ref.get_str());
  }
}

TEST_CASE("BigInt arithmetic agrees with GMP") {
  tandem::Rng rng(20240901);
  for (int i = 0; i < 2000; ++i) {
    // Mix small and multi-limb magnitudes.
    int digits_a = 1 + static_cast<int>(rng.next_below(30));
    int digits_b = 1 + static_cast<int>(rng.next_below(30));
    std::string a_str, b_str;
    for (int d = 0; d < digits_a; ++d)
      a_str += static_cast<char>('0' + rng.next_below(10));
    for (int d = 0; d < digits_b; ++d)
      b_str += static_cast<char>('0' + rng.next_below(10));
    if (rng.next_below(2)) a_str.insert(0, "-");
    if (rng.next_below(2)) b_str.insert(0, "-");

    BigInt a = BigInt::from_decimal(a_str);
    BigInt b = BigInt::from_decimal(b_str);
    mpz_class ga(a_str), gb(b_str);

    CHECK((a + b).to_decimal() == mpz_class(ga + gb).get_str());
    CHECK((a - b).to_decimal() == mpz_class(ga - gb).get_str());
    CHECK((a * b).to_decimal() == mpz_class(ga * gb).get_str());
    if (gb != 0) {
      mpz_class q, r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ga.get_mpz_t(), gb.get_mpz_t());
      CHECK((a / b).to_decimal() == q.get_str());
      CHECK((a % b).to_decimal() == r.get_str());
    }
    CHECK((a < b) == (ga < gb));
    CHECK((a == b) == (ga == gb));
  }
}

TEST_CASE("BigInt truncating division signs") {
  CHECK((BigInt(7) / BigInt(2)).to_decimal() == "3");
  CHECK((BigInt(-7) / BigInt(2)).to_decimal() == "-3");
  CHECK((BigInt(7) % BigInt(-2)).to_decimal() == "1");
  CHECK((BigInt(-7) % BigInt(2)).to_decimal() == "-1");
  CHECK_THROWS_AS(BigInt(1) / BigInt(0), std::domain_error);
}

TEST_CASE("BigInt gcd and pow") {
  CHECK(BigInt::gcd(BigInt(12), BigInt(-18)).to_decimal() == "6");
  CHECK(BigInt::gcd(BigInt(0), BigInt(5)).to_decimal() == "5");
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 999999937, 8);
  CHECK(BigInt::pow(BigInt(999999937), 8).to_decimal() == big.get_str());
}

TEST_CASE("Rational normalization invariants") {
  Rational r(BigInt(2), BigInt(-6));
  CHECK(r.numerator().to_decimal() == "-1");
  CHECK(r.denominator().to_decimal() == "3");
  CHECK(Rational(BigInt(0), BigInt(-7)).denominator().to_decimal() == "1");
  CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), std::domain_error);
  CHECK(Rational(BigInt(1), BigInt(3)) == Rational(BigInt(2), BigInt(6)));
}

TEST_CASE("Rational decimal parsing is exact") {
  CHECK(Rational::from_decimal_string("1234.5") ==
        Rational(BigInt(2469), BigInt(2)));
  CHECK(Rational::from_decimal_string("0.7") == Rational(BigInt(7), BigInt(10)));
  CHECK(Rational::from_decimal_string("-0.5") == Rational(BigInt(-1), BigInt(2)));
  // The downloads chain needs 180 * 0.7 to be exactly 126.
  CHECK(Rational(180) * Rational::from_decimal_string("0.7") == Rational(126));
}

TEST_CASE("Rational render forms") {
  CHECK(Rational(42).to_string() == "42");
  CHECK(Rational(BigInt(2469), BigInt(2)).to_string() == "1234.5");
  CHECK(Rational(BigInt(-1), BigInt(2)).to_string() == "-0.5");
  CHECK(Rational(BigInt(1), BigInt(3)).to_string() == "1/3");
  CHECK(Rational(BigInt(7), BigInt(50)).to_string() == "0.14");
  CHECK(Rational(BigInt(-5), BigInt(6)).to_string() == "-5/6");
}

TEST_CASE("Rational arithmetic agrees with GMP mpq") {
  tandem::Rng rng(77);
  auto random_rational = [&](Rational& out, mpq_class& ref) {
    long long num = static_cast<long long>(rng.next_below(4000)) - 2000;
    long long den = 1 + static_cast<long long>(rng.next_below(50));
    out = Rational(BigInt(num), BigInt(den));
    ref = mpq_class(static_cast<long>(num), static_cast<long>(den));
    ref.canonicalize();
  };
  for (int i = 0; i < 2000; ++i) {
    Rational a, b;
    mpq_class ga, gb;
    random_rational(a, ga);
    random_rational(b, gb);
    auto same = [](const Rational& r, const mpq_class& q) {
      return r.numerator().to_decimal() == q.get_num().get_str() &&
             r.denominator().to_decimal() == q.get_den().get_str();
    };
    CHECK(same(a + b, mpq_class(ga + gb)));
    CHECK(same(a - b, mpq_class(ga - gb)));
    CHECK(same(a * b, mpq_class(ga * gb)));
    if (gb != 0) CHECK(same(a / b, mpq_class(ga / gb)));
    CHECK((a < b) == (ga < gb));
  }
}

TEST_CASE("Rational pow") {
  CHECK(Rational::pow(Rational(2), 10) == Rational(1024));
  CHECK(Rational::pow(Rational(2), -2) == Rational(BigInt(1), BigInt(4)));
  CHECK(Rational::pow(Rational(BigInt(2), BigInt(3)), 2) ==
        Rational(BigInt(4), BigInt(9)));
  CHECK(Rational::pow(Rational(5), 0) == Rational(1));
  CHECK_THROWS_AS(Rational::pow(Rational(0), -1), std::domain_error);
}
