#include "doctest.h"

#include "dioph/errors.hpp"
#include "dioph/exact_arith.hpp"
#include "oracle.hpp"

using namespace dioph;

namespace {

std::vector<long> as_longs(const std::vector<BigInt>& v) {
  std::vector<long> out;
  for (const auto& z : v) out.push_back(z.get_si());
  return out;
}

}  // namespace

TEST_CASE("cf_digits") {
  CHECK(as_longs(cf_digits(RealDescriptor::sqrt2(), 4)) == std::vector<long>{1, 2, 2, 2, 2});
  CHECK(as_longs(cf_digits(RealDescriptor::golden(), 3)) == std::vector<long>{1, 1, 1, 1});
  CHECK(as_longs(cf_digits(RealDescriptor::parse("cf: 0; (3)"), 2)) == std::vector<long>{0, 3, 3});
  CHECK(as_longs(cf_digits(RealDescriptor::parse("cf: 2; 5 (period: 1 4)"), 5)) ==
        std::vector<long>{2, 5, 1, 4, 1, 4});
}

TEST_CASE("descriptor parsing") {
  CHECK(RealDescriptor::parse("cf:1;(2)").text() == RealDescriptor::sqrt2().text());
  CHECK_THROWS_AS(RealDescriptor::parse("cf: 1; 2"), MalformedDescriptor);
  CHECK_THROWS_AS(RealDescriptor::parse("1; (2)"), MalformedDescriptor);
  CHECK_THROWS_AS(RealDescriptor::parse("cf: 1; (0)"), MalformedDescriptor);
  CHECK_THROWS_AS(RealDescriptor::parse("cf: 1; ()"), MalformedDescriptor);
  auto x = RealDescriptor::parse("cf: 0; 7 (period: 1 2)");
  CHECK(RealDescriptor::parse(x.text()).text() == x.text());
}

TEST_CASE("convergents") {
  auto c = convergents(RealDescriptor::sqrt2(), 3);
  CHECK(c.p == 17);
  CHECK(c.q == 12);
  CHECK(c.p_prev == 7);
  CHECK(c.q_prev == 5);
  auto z = convergents(RealDescriptor::parse("cf: 5; (3)"), 0);
  CHECK(z.p == 5);
  CHECK(z.q == 1);
  // Same indexing as sqrt2 above (q_0 = 1): Fibonacci shifted by one.
  auto g = convergents(RealDescriptor::golden(), 5);
  CHECK(g.q == 8);
  CHECK(g.q_prev == 5);
  CHECK(convergents(RealDescriptor::golden(), 6).q == 13);
}

TEST_CASE("determinant identity on random digit streams") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> digits(31);
    for (auto& d : digits) d = 1 + static_cast<std::int64_t>(rng() % 50);
    auto x = RealDescriptor::generated(
        BigInt(static_cast<long>(rng() % 5)), [digits](std::size_t n) { return digits[n % digits.size()]; }, 50,
        "table");
    for (std::size_t n = 1; n <= 30; ++n) {
      const auto& c = x.convergent(n);
      BigInt det = c.p * c.q_prev - c.p_prev * c.q;
      CHECK(det == (n % 2 == 1 ? 1 : -1));
    }
  }
}

TEST_CASE("dist_enclosure examples") {
  auto e = dist_enclosure(2, RealDescriptor::sqrt2(), BigRational(1, 1000));
  CHECK(e.width() <= BigRational(1, 1000));
  oracle::Value s2(oracle::Real::sqrt2);
  CHECK(e.contains(s2.dist(2)));
  CHECK(e.lo > BigRational(1706, 10000));
  CHECK(e.hi < BigRational(1726, 10000));

  auto x = RealDescriptor::parse("cf: 0; (2)");  // sqrt2 - 1, in (1/3, 1/2)
  auto f = dist_enclosure(1, x, BigRational(1, 1000));
  CHECK(f.lo >= BigRational(1, 3));
  CHECK(f.hi <= BigRational(1, 2));
}

TEST_CASE("enclosure soundness against the decimal oracle") {
  oracle::Value s2(oracle::Real::sqrt2);
  auto x = RealDescriptor::sqrt2();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    BigInt q = static_cast<long>(1 + rng() % 10000);
    BigRational eps(1, static_cast<long>(1 + rng() % 1000000000));
    auto e = dist_enclosure(q, x, eps);
    auto truth = s2.dist(q);
    REQUIRE(e.lo <= truth + oracle::slack());
    REQUIRE(truth - oracle::slack() <= e.hi);
    REQUIRE(e.width() <= eps);
  }
}

TEST_CASE("decide_gt examples") {
  auto s2 = RealDescriptor::sqrt2();
  CHECK_FALSE(decide_gt(2, s2, BigRational(1, 5)));
  CHECK(decide_gt(3, s2, BigRational(1, 5)));
  CHECK(decide_gt(1, RealDescriptor::parse("cf: 0; (1)"), BigRational(1, 4)));
}

TEST_CASE("decide_gt agrees with the decimal oracle") {
  std::mt19937_64 rng(5);
  struct Case {
    oracle::Real real;
    RealDescriptor x;
  };
  std::vector<Case> cases{{oracle::Real::sqrt2, RealDescriptor::sqrt2()},
                          {oracle::Real::golden, RealDescriptor::golden()},
                          {oracle::Real::sqrt3_minus_1, RealDescriptor::parse("cf: 0; (1 2)")}};
  for (const auto& cs : cases) {
    oracle::Value v(cs.real);
    for (int i = 0; i < 3400; ++i) {
      BigInt q = static_cast<long>(1 + rng() % 100000);
      long den = static_cast<long>(2 + rng() % 1000000);
      BigRational c(static_cast<long>(rng() % (den / 2 + 1)), den);
      c.canonicalize();
      REQUIRE(decide_gt(q, cs.x, c) == (v.dist(q) > c));
    }
  }
}

TEST_CASE("best approximation sandwich") {
  for (auto x : {RealDescriptor::sqrt2(), RealDescriptor::golden(), RealDescriptor::parse("cf: 0; 3 (1 4 1)")}) {
    for (std::size_t n = 1; n <= 20; ++n) {
      const auto& c = x.convergent(n);
      const auto& next = x.convergent(n + 1);
      auto e = dist_enclosure(c.q, x, make_rational(1, next.q * next.q * next.q));
      CHECK(e.lo >= make_rational(1, next.q + c.q));
      CHECK(e.hi <= make_rational(1, next.q));
    }
  }
}

TEST_CASE("cf_of_rational") {
  CHECK(as_longs(cf_of_rational(BigRational(17, 12))) == std::vector<long>{1, 2, 2, 2});
  CHECK(as_longs(cf_of_rational(BigRational(7))) == std::vector<long>{7});
  CHECK(as_longs(cf_of_rational(BigRational(2, 5))) == std::vector<long>{0, 2, 2});
  CHECK(as_longs(cf_of_rational(BigRational(-7, 3))) == std::vector<long>{-3, 1, 2});
}

TEST_CASE("cf round trip on random rationals") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    auto r = oracle::random_rational(rng, 1000000, 1000000);
    auto digits = cf_of_rational(r);
    REQUIRE(evaluate_cf(digits) == r);
    if (digits.size() > 1) {
      REQUIRE(digits.back() >= 2);
      for (std::size_t k = 1; k < digits.size(); ++k) REQUIRE(digits[k] >= 1);
    }
  }
}

TEST_CASE("lacunarity lower bound") {
  CHECK(lacunarity_lower_bound(RealDescriptor::sqrt2(), 5) == 2);
  CHECK(lacunarity_lower_bound(RealDescriptor::golden(), 6) == 1);
  CHECK(lacunarity_lower_bound(RealDescriptor::golden(), 6, 2) == BigRational(3, 2));
  auto x = RealDescriptor::parse("cf: 0; 3 (1 4)");
  const auto& c0 = x.convergent(0);
  const auto& c1 = x.convergent(1);
  const auto& c2 = x.convergent(2);
  BigRational r1 = make_rational(c1.q, c0.q), r2 = make_rational(c2.q, c1.q);
  CHECK(lacunarity_lower_bound(x, 2) == (r1 < r2 ? r1 : r2));
  CHECK(lacunarity_from_digit_bound(2) == BigRational(4, 3));
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("6/8") == BigRational(3, 4));
  CHECK(parse_rational("-3") == -3);
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("0.5"), InvalidInput);
  CHECK(to_string(BigRational(3, 4)) == "3/4");
  CHECK(to_string(BigRational(5)) == "5/1");
}

TEST_CASE("distance to the nearest integer on an interval") {
  CHECK(dist_to_int(BigRational(7, 3)) == BigRational(1, 3));
  CHECK(min_dist_on_interval(3, BigRational(1, 10), BigRational(2, 10)) == BigRational(3, 10));
  CHECK(min_dist_on_interval(3, BigRational(3, 10), BigRational(4, 10)) == 0);
  CHECK(max_dist_on_interval(1, BigRational(1, 10), BigRational(9, 10)) == BigRational(1, 2));
}
