#include "doctest.h"

#include <set>

#include "dioph/errors.hpp"
#include "dioph/schmidt_game.hpp"

using namespace dioph;

namespace {

const StrategyConstants& half() {
  static const StrategyConstants k = derive_constants(BigRational(1, 2), DSequence::constant(2));
  return k;
}

// Every (n, p) with [p/n - 1/n^2, p/n + 1/n^2] meeting I, n = iM for i in the level's range.
std::set<std::pair<BigInt, BigInt>> scan(const Interval& I, std::size_t level, const StrategyConstants& k) {
  std::set<std::pair<BigInt, BigInt>> out;
  auto [first, last] = k.level_range(level);
  for (BigInt i = first; i <= last; ++i) {
    BigInt n = i * k.M;
    BigRational w = make_rational(1, n * n);
    for (BigInt p = floor_of(n * I.lo) - 1; p <= ceil_of(n * I.hi) + 1; ++p) {
      BigRational c = make_rational(p, n);
      if (c + w >= I.lo && c - w <= I.hi) out.insert({n, p});
    }
  }
  return out;
}

std::set<std::pair<BigInt, BigInt>> as_set(const std::vector<DangerStrip>& strips) {
  std::set<std::pair<BigInt, BigInt>> out;
  for (const auto& s : strips) out.insert({s.n, s.p});
  return out;
}

}  // namespace

TEST_CASE("derive_constants") {
  const auto& k = half();
  CHECK(k.R == 4);
  CHECK(k.threshold == 65568);
  CHECK(k.N == 17);
  CHECK(k.M == 131072);
  CHECK(k.V(0) == BigRational(1, 8192));

  auto k23 = derive_constants(BigRational(2, 3), DSequence::constant(2));
  CHECK(k23.R == 3);
  CHECK(k23.threshold == 6579);
  CHECK(k23.M == 8192);

  auto k910 = derive_constants(BigRational(9, 10), DSequence::constant(2));
  CHECK(k910.R == BigRational(20, 9));
  CHECK(k910.R > 2);

  auto k14 = derive_constants(BigRational(1, 4), DSequence::constant(2));
  CHECK(k14.R == 8);
  CHECK(k14.M == BigInt(1) << 25);

  CHECK_THROWS_AS(derive_constants(1, DSequence::constant(2)), InvalidInput);
  CHECK_THROWS_AS(derive_constants(0, DSequence::constant(2)), InvalidInput);
  auto over = derive_constants(BigRational(1, 2), DSequence::constant(2), BigRational(1000000));
  CHECK(over.M == BigInt(1) << 20);
}

TEST_CASE("level ranges") {
  const auto& k = half();
  for (std::size_t s = 0; s < 6; ++s) {
    auto [first, last] = k.level_range(s);
    CHECK(last < first);
  }
  auto [f6, l6] = k.level_range(6);
  CHECK(f6 == 1);
  CHECK(l6 == 1);
  auto [f8, l8] = k.level_range(8);
  CHECK(f8 == 8);
  CHECK(l8 == 31);
}

TEST_CASE("empty danger sets") {
  const auto& k = half();
  Interval I{0, BigRational(1, 8192)};
  for (std::size_t s = 0; s < 5; ++s) CHECK(enumerate_danger(I, s, k).empty());
  // Level 7 uses n = iM, 2 <= i <= 7; every p/(iM) lies on the grid 1/(420M),
  // so an odd multiple of 1/(840M) is far from all of them.
  BigRational mid = make_rational(2001, 840 * k.M);
  Interval far{mid - BigRational(1, BigInt(1) << 60), mid + BigRational(1, BigInt(1) << 60)};
  CHECK(danger_at_level(far, 7, k).empty());
  CHECK(scan(far, 7, k).empty());
}

TEST_CASE("danger families match the brute-force scan") {
  const auto& k = half();
  std::mt19937_64 rng(41);
  std::size_t nonempty = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t level = 6 + rng() % 4;
    BigInt den = BigInt(1) << static_cast<unsigned>(20 + rng() % 14);
    BigRational lo = make_rational(static_cast<long>(rng() % 1000000), 1000000);
    Interval I{lo, lo + make_rational(1 + static_cast<long>(rng() % 64), den)};
    auto set = danger_at_level(I, level, k);
    auto expected = scan(I, level, k);
    REQUIRE(as_set(expand(set)) == expected);
    REQUIRE(as_set(danger_brute_force(I, level, k)) == expected);
    nonempty += !expected.empty();
    for (const auto& f : set.families) {
      CHECK(f.center == make_rational(f.P, f.Q * k.M));
      CHECK(f.k_lo <= f.k_hi);
    }
  }
  CHECK(nonempty > 0);
}

TEST_CASE("strip width bound") {
  const auto& k = half();
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t s = 5 + rng() % 3;
    BigRational lo = make_rational(static_cast<long>(rng() % 100000), 100000);
    Interval I{lo, lo + BigRational(1, 1 << 22)};
    auto E = enumerate_danger(I, s, k);
    BigRational bound = 2 / ((k.M * k.V(s + 1)) * (k.M * k.V(s + 1)));
    for (const auto& st : expand(E)) CHECK(st.strip.length() <= bound);
  }
}

TEST_CASE("validate_move") {
  GameConfig cfg;
  auto t = play(cfg, "leftmost", 1, 0);
  REQUIRE(t.moves.size() == 2);
  const auto& A0 = t.moves.back().iv;
  BigRational len = cfg.beta * A0.length();
  CHECK(validate_move(t, Interval{A0.lo, A0.lo + len}, Role::B) == Violation::none);
  CHECK(validate_move(t, Interval{A0.lo, A0.lo + len / 2}, Role::B) == Violation::wrong_length);
  CHECK(validate_move(t, Interval{A0.hi, A0.hi + len}, Role::B) == Violation::not_nested);
  CHECK(validate_move(t, Interval{A0.lo + len, A0.lo}, Role::B) == Violation::not_closed);
  CHECK(to_string(Violation::wrong_length) != to_string(Violation::not_nested));
}

TEST_CASE("A's moves follow the strategy") {
  std::size_t avoid = 0, centered = 0;
  for (const auto& adv : adversary_names()) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto t = play(GameConfig{}, adv, 30, seed);
      for (std::size_t i = 1; i < t.moves.size(); i += 2) {
        const auto& B = t.moves[i - 1].iv;
        const auto& A = t.moves[i];
        REQUIRE(A.role == Role::A);
        REQUIRE(A.rationale);
        if (A.rationale->kind == "avoid") {
          ++avoid;
          const auto& c = *A.rationale->center;
          CHECK(A.rationale->half == (c < B.mid() ? "right" : "left"));
          CHECK_FALSE((c > A.iv.lo && c < A.iv.hi));
        } else if (A.rationale->kind == "centered" || A.rationale->kind == "quarter") {
          ++centered;
          CHECK(A.iv.mid() == B.mid());
        }
      }
    }
  }
  CHECK(avoid > 0);
  CHECK(centered > 0);
}

TEST_CASE("exact geometry of engine games") {
  for (auto beta : {BigRational(1, 2), BigRational(1, 4), BigRational(2, 3)}) {
    GameConfig cfg;
    cfg.beta = beta;
    for (const auto& adv : adversary_names()) {
      auto t = play(cfg, adv, 30, 9);
      REQUIRE(t.moves.size() == 60);
      for (std::size_t i = 1; i < t.moves.size(); ++i) {
        const auto& prev = t.moves[i - 1].iv;
        const auto& cur = t.moves[i].iv;
        BigRational ratio = t.moves[i].role == Role::A ? cfg.alpha : cfg.beta;
        CHECK(cur.length() == ratio * prev.length());
        CHECK(cur.lo >= prev.lo);
        CHECK(cur.hi <= prev.hi);
      }
      auto r = verify_transcript(t);
      CHECK(r.ok());
      CHECK(r.claim1_violations == 0);
    }
  }
}

TEST_CASE("play") {
  auto t1 = play(GameConfig{}, "random", 1, 3);
  CHECK(t1.moves.size() == 2);
  CHECK(t1.moves[0].role == Role::B);
  CHECK(t1.moves[1].role == Role::A);

  auto t = play(GameConfig{}, "random", 30, 1);
  auto r = verify_transcript(t);
  CHECK(r.ok());
  CHECK(r.c1_checks > 0);
  CHECK(r.c1_vacuous > 0);
  CHECK(verify_transcript(play(GameConfig{}, "hostile", 30, 1)).ok());

  GameConfig third;
  third.alpha = BigRational(1, 3);
  CHECK_THROWS_AS(play(third, "random", 3, 1), InvalidInput);
  CHECK_THROWS_AS(play(GameConfig{}, "sneaky", 3, 1), Error);
}

TEST_CASE("games are deterministic per seed") {
  auto a = to_json(play(GameConfig{}, "random", 20, 5)).dump();
  auto b = to_json(play(GameConfig{}, "random", 20, 5)).dump();
  auto c = to_json(play(GameConfig{}, "random", 20, 6)).dump();
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("an invalid B move forfeits") {
  Adversary cheat = [](const Transcript& t, std::mt19937_64&) {
    if (t.moves.empty()) return Interval{0, BigRational(1, 2)};
    return t.moves.back().iv;  // wrong length
  };
  auto t = play(GameConfig{}, cheat, "cheat", 5, 0);
  CHECK(t.forfeit);
  CHECK(t.moves.size() == 2);
}

TEST_CASE("fault injection: an A move replaced by B's interval") {
  auto t = play(GameConfig{}, "random", 30, 2);
  REQUIRE(verify_transcript(t).ok());
  for (std::size_t i : {1u, 17u, 30u}) {
    auto bad = t;
    bad.moves[i].iv = bad.moves[i - 1].iv;
    auto r = verify_transcript(bad);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.problems.empty());
  }
  // Shifting the committed A onto a danger center breaks (C1) or the odd-move check.
  Transcript shifted;
  bool found = false;
  for (std::uint64_t seed = 1; seed < 50 && !found; ++seed) {
    shifted = play(GameConfig{}, "random", 30, seed);
    for (std::size_t i = 1; i < shifted.moves.size() && !found; i += 2) {
      const auto& m = shifted.moves[i];
      if (m.rationale && m.rationale->kind == "avoid") {
        const auto& B = shifted.moves[i - 1].iv;
        BigRational len = m.iv.length();
        shifted.moves[i].iv = m.rationale->half == "right" ? Interval{B.lo, B.lo + len} : Interval{B.hi - len, B.hi};
        found = true;
      }
    }
  }
  REQUIRE(found);
  CHECK_FALSE(verify_transcript(shifted).ok());
}

TEST_CASE("post_check") {
  auto one = play(GameConfig{}, "random", 1, 1);
  auto pc1 = post_check(one, BigInt(1) << 256);
  CHECK(pc1.checked == 0);
  CHECK(pc1.divisible == 0);

  for (const auto& adv : adversary_names()) {
    auto t = play(GameConfig{}, adv, 30, 4);
    auto pc = post_check(t, BigInt(1) << 256);
    CHECK(pc.checked > 0);
    CHECK(pc.divisible == 0);
    CHECK(pc.norm_ok);
  }
}

TEST_CASE("transcript json round trip") {
  auto t = play(GameConfig{}, "hostile", 12, 8);
  auto j = to_json(t);
  CHECK(j["kind"] == "game_transcript");
  auto back = transcript_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(verify_transcript(back).ok());
}
