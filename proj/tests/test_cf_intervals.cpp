#include "doctest.h"

#include <algorithm>

#include "dioph/cf_intervals.hpp"
#include "oracle.hpp"

using namespace dioph;

namespace {

FundamentalInterval iv(std::vector<std::int64_t> d) { return interval_of(d); }

// Digits after a_0 of r in (0,1).
std::vector<std::int64_t> tail_digits(const BigRational& r) {
  auto d = cf_of_rational(r);
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < d.size(); ++i) out.push_back(d[i].get_si());
  return out;
}

// True if `digits` starts with `prefix`, also accepting the other expansion
// [.., a_n - 1, 1] of a terminating tail.
bool prefix_match(const std::vector<std::int64_t>& digits, const std::vector<std::int64_t>& prefix) {
  auto starts = [&](const std::vector<std::int64_t>& d) {
    return d.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), d.begin());
  };
  if (starts(digits)) return true;
  if (!digits.empty() && digits.back() >= 2) {
    auto alt = digits;
    alt.back() -= 1;
    alt.push_back(1);
    return starts(alt);
  }
  return false;
}

void all_tuples(std::size_t order, std::int64_t max_digit, std::vector<std::int64_t>& cur,
                std::vector<std::vector<std::int64_t>>& out) {
  if (cur.size() == order) {
    out.push_back(cur);
    return;
  }
  for (std::int64_t a = 1; a <= max_digit; ++a) {
    cur.push_back(a);
    all_tuples(order, max_digit, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("interval_of examples") {
  for (std::int64_t k = 1; k <= 9; ++k) {
    auto i = iv({k});
    CHECK(i.lo == BigRational(1, k + 1));
    CHECK(i.hi == BigRational(1, k));
  }
  auto i22 = iv({2, 2});
  CHECK(i22.lo == BigRational(2, 5));
  CHECK(i22.hi == BigRational(3, 7));
  CHECK(i22.length() == BigRational(1, 35));
  auto i1 = iv({1});
  CHECK(i1.lo == BigRational(1, 2));
  CHECK(i1.hi == 1);
}

TEST_CASE("children examples") {
  auto kids = children(iv({2}), 2);
  REQUIRE(kids.size() == 2);
  CHECK(kids[0].conv.q == 3);
  CHECK(kids[1].conv.q == 5);
  CHECK(interiors_disjoint(kids[0], kids[1]));
  for (const auto& k : kids) CHECK(contains(iv({2}), k));

  auto parent = iv({4, 1, 3});
  auto one = children(parent, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].conv.q == parent.conv.q + parent.conv.q_prev);

  auto ap = children(iv({1}), 3);
  REQUIRE(ap.size() == 3);
  CHECK(ap[0].conv.q == 2);
  CHECK(ap[1].conv.q == 3);
  CHECK(ap[2].conv.q == 4);
}

TEST_CASE("children denominators form an arithmetic progression with step q_k") {
  auto parent = iv({3, 1, 2});
  auto kids = children(parent, 20);
  for (std::size_t s = 1; s < kids.size(); ++s) CHECK(kids[s].conv.q - kids[s - 1].conv.q == parent.conv.q);
}

TEST_CASE("niceness examples") {
  auto s2 = RealDescriptor::sqrt2();
  CHECK(is_nice(iv({2, 2}), s2, BigRational(1, 100)).nice());
  auto cert = is_nice(iv({1, 1}), s2, BigRational(1, 5));
  CHECK_FALSE(cert.nice());
  REQUIRE(cert.verdicts.size() == 2);
  CHECK(cert.verdicts[0].q_k == 1);
  CHECK(cert.verdicts[0].ok);
  CHECK(cert.verdicts[1].q_k == 2);
  CHECK_FALSE(cert.verdicts[1].ok);
  CHECK(is_nice(iv({3, 1, 4, 1, 5}), s2, BigRational(1, 1000000000)).nice());
}

TEST_CASE("membership and gap examples") {
  CHECK(contains(iv({2, 2}), BigRational(2, 5)));
  CHECK(gap(BigRational(1, 3), BigRational(2, 5), BigRational(3, 7), BigRational(1, 2)) == BigRational(1, 35));
  CHECK_FALSE(contains(iv({1}), BigRational(1, 3)));
}

TEST_CASE("membership is equivalent to a digit prefix") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::int64_t> d(1 + rng() % 4);
    for (auto& a : d) a = 1 + static_cast<std::int64_t>(rng() % 6);
    auto I = iv(d);
    long den = 2 + static_cast<long>(rng() % 100000);
    BigRational u(1 + static_cast<long>(rng() % (den - 1)), den);
    u.canonicalize();
    BigRational inside = I.lo + (I.hi - I.lo) * u;
    REQUIRE(contains(I, inside));
    REQUIRE(prefix_match(tail_digits(inside), d));

    BigRational outside;
    do {
      long den2 = 2 + static_cast<long>(rng() % 100000);
      outside = BigRational(1 + static_cast<long>(rng() % (den2 - 1)), den2);
      outside.canonicalize();
    } while (outside >= I.lo && outside <= I.hi);
    REQUIRE_FALSE(contains(I, outside));
    REQUIRE_FALSE(prefix_match(tail_digits(outside), d));
  }
}

TEST_CASE("same-order intervals have disjoint interiors") {
  for (std::size_t order = 1; order <= 4; ++order) {
    std::vector<std::vector<std::int64_t>> tuples;
    std::vector<std::int64_t> cur;
    all_tuples(order, 6, cur, tuples);
    std::vector<FundamentalInterval> ivs;
    for (const auto& t : tuples) ivs.push_back(interval_of(t));
    std::sort(ivs.begin(), ivs.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    std::size_t violations = 0;
    for (std::size_t i = 1; i < ivs.size(); ++i) violations += !interiors_disjoint(ivs[i - 1], ivs[i]);
    CHECK(violations == 0);
  }
}

TEST_CASE("length formula and nesting") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::int64_t> d(1 + rng() % 8);
    for (auto& a : d) a = 1 + static_cast<std::int64_t>(rng() % 40);
    auto I = iv(d);
    CHECK(I.length() == make_rational(1, I.conv.q * (I.conv.q + I.conv.q_prev)));
    CHECK(I.length() == I.length_formula());
    auto s = 1 + static_cast<std::int64_t>(rng() % 40);
    auto child = child_of(I, s);
    CHECK(contains(I, child));
    auto dens = child.associated_denominators();
    CHECK(dens.size() == d.size() + 1);
    CHECK(dens.back() == child.conv.q);
  }
}

TEST_CASE("interval json round trip") {
  auto I = iv({5, 1, 2});
  CHECK(interval_from_json(to_json(I)).lo == I.lo);
  auto cert = is_nice(I, RealDescriptor::sqrt2(), BigRational(1, 16));
  auto back = certificate_from_json(to_json(cert));
  CHECK(back.nice() == cert.nice());
  CHECK(back.verdicts.size() == cert.verdicts.size());
}
