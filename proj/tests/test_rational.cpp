#include <doctest.h>

#include <parity_forge/rational.hpp>

#include <map>
#include <sstream>

using pf::Rat;

TEST_CASE("rational: construction and canonical serialized form") {
  // the denominator is always spelled out so serialization is one-to-one
  CHECK(Rat(1, 2).str() == "1/2");
  CHECK(Rat(2, 4).str() == "1/2");
  CHECK(Rat(-2, 4).str() == "-1/2");
  CHECK(Rat(2, -4).str() == "-1/2");
  CHECK(Rat(0, 7).str() == "0/1");
  CHECK(Rat(5).str() == "5/1");
  CHECK(Rat().str() == "0/1");
  CHECK(Rat(7, 7) == Rat(1));
  CHECK_THROWS_AS(Rat(1, 0), pf::InputError);
}

TEST_CASE("rational: arithmetic stays exact") {
  const Rat a(1, 3), b(1, 6);
  CHECK(a + b == Rat(1, 2));
  CHECK(a - b == Rat(1, 6));
  CHECK(a * b == Rat(1, 18));
  CHECK(a / b == Rat(2));
  CHECK(-a == Rat(-1, 3));
  Rat c;
  for (int i = 0; i < 10; ++i) c += Rat(1, 10);
  CHECK(c == Rat(1));

  // no drift on a classic float trap
  Rat sum = Rat(1, 10) + Rat(2, 10);
  CHECK(sum == Rat(3, 10));
}

TEST_CASE("rational: comparisons and sign") {
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(0));
  CHECK(Rat(2, 3) > Rat(1, 2));
  CHECK(Rat(1, 2) <= Rat(1, 2));
  CHECK(Rat(1, 2).sign() == 1);
  CHECK(Rat(-1, 2).sign() == -1);
  CHECK(Rat(0).sign() == 0);
  CHECK(Rat(0).is_zero());
  CHECK(!Rat(1, 1000000).is_zero());
}

TEST_CASE("rational: parse accepts fractions, integers, exact decimals") {
  CHECK(Rat::parse("3/4") == Rat(3, 4));
  CHECK(Rat::parse("-3/4") == Rat(-3, 4));
  CHECK(Rat::parse("17") == Rat(17));
  CHECK(Rat::parse("0") == Rat(0));
  CHECK(Rat::parse("0.25") == Rat(1, 4));
  CHECK(Rat::parse("1.5") == Rat(3, 2));
  CHECK(Rat::parse("-0.125") == Rat(-1, 8));
  CHECK(Rat::try_parse("a/b") == std::nullopt);
  CHECK(Rat::try_parse("1/0") == std::nullopt);
  CHECK(Rat::try_parse("") == std::nullopt);
  CHECK_THROWS_AS(Rat::parse("nope"), pf::InputError);
}

TEST_CASE("rational: pow2 covers both directions") {
  CHECK(Rat::pow2(0) == Rat(1));
  CHECK(Rat::pow2(3) == Rat(8));
  CHECK(Rat::pow2(-3) == Rat(1, 8));
  CHECK(Rat::pow2(-20) * Rat::pow2(20) == Rat(1));
  // the slack schedule sums strictly below one
  Rat s;
  for (int i = 1; i <= 40; ++i) s += Rat::pow2(-i);
  CHECK(s < Rat(1));
}

TEST_CASE("rational: to_double is close and monotone") {
  CHECK(Rat(1, 2).to_double() == 0.5);
  CHECK(Rat(1, 3).to_double() > 0.33);
  CHECK(Rat(1, 3).to_double() < 0.34);
  CHECK(Rat(-1, 4).to_double() == -0.25);
}

TEST_CASE("rational: usable as ordered map key") {
  std::map<Rat, int> m;
  m[Rat(1, 2)] = 1;
  m[Rat(2, 4)] = 2;
  m[Rat(1, 3)] = 3;
  CHECK(m.size() == 2);
  CHECK(m.begin()->first == Rat(1, 3));
}

TEST_CASE("rational: large denominators do not overflow") {
  Rat prod(1);
  for (int i = 1; i <= 30; ++i) prod = prod * Rat(1, 1 + i % 7);
  Rat back = prod;
  for (int i = 30; i >= 1; --i) back = back * Rat(1 + i % 7);
  CHECK(back == Rat(1));
}
