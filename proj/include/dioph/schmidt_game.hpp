#pragma once

/**
 * Schmidt (alpha, beta)-game on the real line with exact rational intervals,
 * and player A's strategy that keeps the outcome x away from every strip
 * S_{iM} = {x : iM ||iM x|| <= 1}, so that M never divides a convergent
 * denominator of x.
 *
 * Constants: R = 2/beta, M = t_N with N minimal such that t_N > R^8 + 2R^2,
 * V_s = R^{s+2}/M, T_s = union of S_{iM} over V_s <= i < V_{s+1}.
 *
 * A_0 is the centered half of B_0. At A_{2s+1}, A looks at the strips of
 * levels V_{s+1} <= i < V_{s+2} meeting A_{2s}; they share one center, and A
 * takes the half of B_{2s+1} that does not have it as an interior point.
 * At A_{2s+2}, A takes the centered half of B_{2s+2}, which then misses all
 * of those strips.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dioph/exact_arith.hpp"
#include "dioph/mixed_norm.hpp"
#include "json.hpp"

namespace dioph {

struct Interval {
  BigRational lo;
  BigRational hi;

  BigRational length() const { return hi - lo; }
  BigRational mid() const { return (lo + hi) / 2; }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

/// Distance from r to the closed interval (0 inside).
BigRational distance(const BigRational& r, const Interval& iv);

struct GameConfig {
  BigRational alpha{1, 2};
  BigRational beta{1, 2};
  std::optional<Interval> b0;  // default [0, beta]
  DSequence D = DSequence::constant(2);
  std::optional<BigRational> threshold;  // default R^8 + 2R^2
};

struct StrategyConstants {
  BigRational beta;
  BigRational R;          // 2/beta
  BigRational threshold;  // R^8 + 2R^2 unless overridden
  std::size_t N = 0;
  BigInt M;               // t_N

  /// R^{s+2}/M
  BigRational V(std::size_t s) const;
  /// Integers i with V_s <= i < V_{s+1}, as [first, last]; empty when last < first.
  std::pair<BigInt, BigInt> level_range(std::size_t s) const;
};

StrategyConstants derive_constants(const BigRational& beta, const DSequence& D,
                                   const std::optional<BigRational>& threshold = std::nullopt);

/// Strips [p/n - 1/n^2, p/n + 1/n^2] with n = Q k M, p = P k for k in
/// [k_lo, k_hi]; every member has the same center P/(QM).
struct DangerFamily {
  BigRational center;
  BigInt P, Q;
  BigInt k_lo, k_hi;

  BigInt count() const { return k_hi - k_lo + 1; }
};

struct DangerStrip {
  BigInt n;
  BigInt p;
  BigRational center;
  Interval strip;
};

struct DangerSet {
  std::size_t level = 0;  // strips of S_{iM} for V_level <= i < V_{level+1}
  BigInt M;
  BigInt i_first, i_last;
  std::vector<DangerFamily> families;  // ascending center

  bool empty() const { return families.empty(); }
  BigInt strip_count() const;
};

/// Strips of S_{iM}, V_level <= i < V_{level+1}, meeting the closed interval I.
DangerSet danger_at_level(const Interval& I, std::size_t level, const StrategyConstants& k);
/// The set E_{s+1}: levels V_{s+1} <= i < V_{s+2}.
DangerSet enumerate_danger(const Interval& I, std::size_t s, const StrategyConstants& k);
/// Individual strips of a set; throws InvalidInput above `limit` strips.
std::vector<DangerStrip> expand(const DangerSet& set, std::size_t limit = 1u << 20);
/// Per-i scan over all numerators; the reference for tests.
std::vector<DangerStrip> danger_brute_force(const Interval& I, std::size_t level, const StrategyConstants& k);
/// Members of `family` whose strip meets J.
BigInt strips_meeting(const DangerFamily& family, const Interval& J, const StrategyConstants& k);

enum class Role { A, B };

struct MoveRationale {
  std::string kind;  // "initial", "avoid", "centered", "quarter"
  std::size_t s = 0;
  std::optional<BigRational> center;  // shared center of E_{s+1} at odd moves
  std::string half;                   // "left" / "right" for avoid moves
  DangerSet danger;                   // E_{s+1} at odd moves, T_s check at even moves
};

struct Move {
  Role role;
  std::size_t n = 0;  // B_n or A_n
  Interval iv;
  std::optional<MoveRationale> rationale;
};

struct Transcript {
  GameConfig config;
  StrategyConstants constants;
  std::string adversary;
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  std::vector<Move> moves;
  std::optional<std::string> forfeit;  // B's invalid move, if any
};

enum class Violation { none, wrong_length, not_nested, not_closed };
std::string to_string(Violation v);

/// Checks a proposed move against the last move of the other player.
Violation validate_move(const Transcript& t, const Interval& iv, Role role);

/// Player A's move for the current state of t (t ends with a B move).
Move strategy_a_move(const Transcript& t);

/// B's choice: B_0 when t has no moves, otherwise B_{n+1} inside the last A_n.
using Adversary = std::function<Interval(const Transcript&, std::mt19937_64&)>;

Adversary make_adversary(const std::string& name);
const std::vector<std::string>& adversary_names();

Transcript play(const GameConfig& config, const std::string& adversary, std::size_t rounds, std::uint64_t seed);
Transcript play(const GameConfig& config, const Adversary& adversary, const std::string& name, std::size_t rounds,
                std::uint64_t seed);

struct TranscriptReport {
  bool geometry_ok = true;       // lengths, nesting, closedness
  std::size_t c1_checks = 0;     // even A moves checked against T_s
  std::size_t c1_vacuous = 0;    // ... of which T_s has no index i at all
  std::size_t c1_failures = 0;
  std::size_t claim1_checks = 0;      // odd moves with a nonempty E_{s+1}
  std::size_t claim1_violations = 0;  // E_{s+1} with more than one center
  std::size_t odd_failures = 0;       // A_{2s+1} has a center of E_{s+1} inside
  std::size_t even_failures = 0;      // A_{2s+2} meets a strip of E_{s+1}
  std::vector<std::string> problems;

  bool ok() const {
    return geometry_ok && c1_failures == 0 && claim1_violations == 0 && odd_failures == 0 && even_failures == 0;
  }
};

/// Recomputes constants and danger sets from the moves alone.
TranscriptReport verify_transcript(const Transcript& t);

struct PostCheck {
  BigRational x_hat;           // midpoint of the last A move
  std::size_t s_max = 0;       // last s with A_{2s} played
  BigInt q_limit;              // certified: convergent denominators q < M V_{s_max+1}
  std::size_t checked = 0;     // convergent denominators of x_hat below min(q_limit, q_bound)
  std::size_t divisible = 0;   // ... divisible by M (expected 0)
  BigRational min_norm;        // min |q|_D over the checked denominators
  bool norm_ok = true;         // min_norm >= 1/M
};

PostCheck post_check(const Transcript& t, const BigInt& q_bound);

nlohmann::ordered_json to_json(const DangerSet& d);
nlohmann::ordered_json to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const TranscriptReport& r);
nlohmann::ordered_json to_json(const PostCheck& p);

}  // namespace dioph
