#include "doctest.h"

#include <cmath>

#include "dioph/construction.hpp"
#include "dioph/errors.hpp"

using namespace dioph;

namespace {

const RealDescriptor& sqrt2() {
  static const RealDescriptor x = RealDescriptor::sqrt2();
  return x;
}

ConstructionParams feasible16(std::size_t depth) {
  return make_params(sqrt2(), 2, Mode::feasible, depth, Enumeration::full, 0, 1, 16);
}

// Number of integers p with [p - c, p + c]/q meeting [lo, hi].
BigInt strips_meeting(const BigInt& q, const BigRational& c, const BigRational& lo, const BigRational& hi) {
  BigInt first = ceil_of(q * lo - c);
  BigInt last = floor_of(q * hi + c);
  return last >= first ? BigInt(last - first + 1) : BigInt(0);
}

}  // namespace

TEST_CASE("three_term_select examples") {
  CHECK(three_term_select(1, 1, sqrt2(), BigRational(1, 5)) == 2);
  CHECK(three_term_select(3, 2, sqrt2(), BigRational(1, 5)) == 2);
  // ||(1 + 2) sqrt2|| = 0.2426 > 1/5 already.
  CHECK(three_term_select(1, 2, sqrt2(), BigRational(1, 5)) == 1);
}

TEST_CASE("Lemma 1 brute force") {
  for (auto x : {RealDescriptor::sqrt2(), RealDescriptor::golden()}) {
    auto r = lemma1_brute_check(x, BigRational(1, 5), 500, 500);
    CHECK(r.counterexamples == 0);
    CHECK(r.pairs_checked > 0);
    std::uint64_t cases = 0;
    for (auto n : r.case_counts) cases += n;
    CHECK(cases == r.pairs_checked);
  }
  CHECK_THROWS_AS(lemma1_brute_check(sqrt2(), BigRational(1, 4), 10, 10), InvalidInput);
  CHECK_THROWS_AS(lemma1_brute_check(sqrt2(), BigRational(3, 10), 10, 10), InvalidInput);
}

TEST_CASE("choose_M") {
  CHECK_FALSE(branching_log_condition(512, 2));
  CHECK(branching_log_condition(1024, 2));
  CHECK(choose_M(2) == 1024);
  CHECK(choose_M(BigRational(3, 2)) == 2048);
  CHECK(choose_M(1000) == 256);
  CHECK_THROWS(choose_M(1));
}

TEST_CASE("choose_c") {
  auto c16 = choose_c(sqrt2(), 16);
  CHECK(c16.exponent == 18);
  CHECK(c16.c == BigRational(1, BigInt(1) << 36));
  CHECK(c16.sqrt_c * c16.sqrt_c == c16.c);
  CHECK(c16.full_scan_passed);
  auto c1024 = choose_c(sqrt2(), 1024);
  CHECK(c1024.exponent == 42);
  CHECK(c1024.scan_limit == 1024 * 1024);
}

TEST_CASE("strict parameters are rejected when too small") {
  CHECK_THROWS_AS(make_params(sqrt2(), 2, Mode::strict, 1, Enumeration::full, 0, 1, 16), InvalidInput);
  auto p = make_params(sqrt2(), 2, Mode::strict, 1);
  CHECK(p.M == 1024);
  CHECK(p.c_exponent == 42);
}

TEST_CASE("base level") {
  auto p = make_params(sqrt2(), 2, Mode::feasible, 1, Enumeration::full, 0, 1, 8);
  auto E1 = build_base_level(p);
  REQUIRE(E1.intervals.size() == 4);
  // Ascending by left endpoint: I(7), I(5), I(3), I(1).
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(E1.intervals[i].interval().digits == std::vector<std::int64_t>{static_cast<std::int64_t>(7 - 2 * i)});
  }
  CHECK(verify_level(E1, p, nullptr).all_pass());
}

TEST_CASE("strict base level") {
  auto p = make_params(sqrt2(), 2, Mode::strict, 1);
  auto E1 = build_base_level(p);
  CHECK(E1.intervals.size() >= 256);
  for (std::size_t i = 1; i < E1.intervals.size(); ++i) {
    CHECK(gap(E1.intervals[i - 1].interval(), E1.intervals[i].interval()) >= BigRational(1, 1024 * 1024));
  }
  CHECK(verify_level(E1, p, nullptr).all_pass());
}

TEST_CASE("window denominators and Claim 3") {
  auto p = feasible16(4);
  auto S = window_denominators(p, 3);
  std::vector<BigInt> expect{70, 169, 408, 985, 2378, 5741, 13860};
  CHECK(S == expect);
  CHECK(claim3_holds(S.size(), p));
  CHECK(claim3_holds(9, p));
  CHECK_FALSE(claim3_holds(10, p));
}

TEST_CASE("feasible construction verifies at every level") {
  auto p = feasible16(4);
  auto con = build_construction(p);
  REQUIRE(con.levels.size() == 4);
  for (const auto& r : con.reports) {
    CHECK(r.all_pass());
    CHECK(r.claim3);
    CHECK(r.min_count >= 2);
  }
  // Claim 1 and Claim 2, from the refinement logs and recomputed.
  for (std::size_t k = 1; k < con.levels.size(); ++k) {
    for (const auto& pr : con.levels[k].reports) {
      CHECK(pr.max_strips_touching_parent <= 1);
      CHECK(pr.max_children_per_strip <= 1);
    }
    const auto& parents = con.levels[k - 1];
    for (const auto& q : window_denominators(p, k)) {
      for (const auto& parent : parents.intervals) {
        CHECK(strips_meeting(q, p.c, parent.interval().lo, parent.interval().hi) <= 1);
      }
    }
  }
  // Every interval avoids the strips of the window it was filtered against.
  for (std::size_t k = 1; k < con.levels.size(); ++k) {
    for (const auto& q : window_denominators(p, k)) {
      for (const auto& li : con.levels[k].intervals) {
        CHECK(min_dist_on_interval(q, li.interval().lo, li.interval().hi) > p.c);
        CHECK(strips_meeting(q, p.c, li.interval().lo, li.interval().hi) == 0);
      }
    }
  }
}

TEST_CASE("refinement drop logs are complete") {
  auto p = feasible16(2);
  auto con = build_construction(p);
  const auto& E2 = con.levels[1];
  for (const auto& pr : E2.reports) {
    CHECK(pr.a_count == static_cast<std::size_t>(pr.a_last - pr.a_first + 1));
    CHECK(pr.a_count == pr.b_count + pr.not_nice.size() + pr.redundant.size());
    CHECK(pr.b_count == pr.c_count + pr.thinned.size());
    CHECK(pr.c_count == pr.e_count + pr.strip_hits.size());
  }
}

TEST_CASE("tampered digit is caught by condition 1") {
  auto p = feasible16(2);
  auto con = build_construction(p);
  auto level = con.levels[1];
  auto digits = level.intervals[0].interval().digits;
  digits.back() = 2 * p.M + 1;
  level.intervals[0].cert.interval = interval_of(digits);
  auto r = verify_level(level, p, &con.levels[0]);
  CHECK_FALSE(r.conditions[0].ok);
  CHECK_FALSE(r.conditions[0].witness.empty());
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("strict stage-count chain on sampled parents") {
  auto p = make_params(sqrt2(), 2, Mode::strict, 3, Enumeration::sampled, 5, 2);
  auto con = build_construction(p);
  const std::size_t window_cap = 21;  // 2 log_2(1024) + 1
  for (const auto& r : con.reports) {
    CHECK(r.all_pass());
    CHECK(r.window_size <= window_cap);
    CHECK(r.min_count * 32 > 1024);
  }
  for (std::size_t k = 1; k < con.levels.size(); ++k) {
    for (const auto& pr : con.levels[k].reports) {
      CHECK(pr.a_count >= 512);
      CHECK(pr.b_count >= 128);
      CHECK(pr.b_count >= pr.a_count / 3);
      CHECK(pr.c_count >= 64);
      CHECK(pr.c_count >= (pr.b_count + 1) / 2);
      CHECK(pr.e_count + window_cap >= pr.c_count);
      CHECK(pr.e_count * 32 > 1024);
    }
  }
}

TEST_CASE("sampled point certificates") {
  auto p = feasible16(4);
  auto cert = sample_point(p, 4, 7);
  CHECK(point_certificate_holds(cert, sqrt2()));
  CHECK(cert.floor > 0);
  for (const auto& b : cert.products) {
    CHECK(b.product.lo > 0);
    CHECK(b.product.lo > cert.floor);
  }
  // Fixture recorded from the first run.
  CHECK(to_string(cert.floor) == "10453/23738868360544256");

  auto one = sample_point(p, 1, 7);
  for (const auto& b : one.products) CHECK(b.n == 1);
  CHECK(point_certificate_holds(one, sqrt2()));

  auto a = sample_point(p, 4, 1), b = sample_point(p, 4, 2);
  CHECK(a.y_interval.digits != b.y_interval.digits);
  CHECK(point_certificate_holds(a, sqrt2()));
  CHECK(point_certificate_holds(b, sqrt2()));
  auto again = sample_point(p, 4, 1);
  CHECK(again.y_interval.digits == a.y_interval.digits);
  CHECK(again.floor == a.floor);
}

TEST_CASE("tampered point certificate fails") {
  auto p = feasible16(3);
  auto cert = sample_point(p, 3, 4);
  REQUIRE(point_certificate_holds(cert, sqrt2()));
  auto bad = cert;
  bad.products.front().dist_x.lo *= 2;
  CHECK_FALSE(point_certificate_holds(bad, sqrt2()));
  bad = cert;
  bad.floor = bad.products.front().product.lo;
  CHECK_FALSE(point_certificate_holds(bad, sqrt2()));
}
