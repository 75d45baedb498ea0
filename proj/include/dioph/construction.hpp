#pragma once

/**
 * Nested Cantor-type construction of points y for which both
 * q_n(x)·||q_n(x) x||·||q_n(x) y|| and q_n(y)·||q_n(y) x||·||q_n(y) y||
 * stay bounded away from zero.
 *
 * Level E_k is a family of order-k fundamental intervals. E_{k+1} is obtained
 * from each parent I in E_k through four filters:
 *   A  children I(..., s), s <= 2M, with M^k <= q_{k+1} < M^{k+1}
 *   B  first nice child of every run of three consecutive A children
 *   C  every other B child in ascending position (gap >= M^{-(2k+3)})
 *   E  C children that avoid every strip |q y - p| <= c for the convergent
 *      denominators q of x in the window [c^{1/2} M^{2k}, c^{1/2} M^{2k+2})
 * Strict mode uses constants for which every count bound is a theorem and
 * turns a violated bound into a SoundnessError. Feasible mode runs the same
 * filters with a small M and checks everything empirically.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/cf_intervals.hpp"
#include "dioph/exact_arith.hpp"

namespace dioph {

enum class Mode { strict, feasible };
enum class Enumeration { full, sampled };

std::string to_string(Mode m);
std::string to_string(Enumeration e);
Mode parse_mode(std::string_view s);
Enumeration parse_enumeration(std::string_view s);

// --- Lemma 1 ---------------------------------------------------------------

/// Smallest j in {1,2,3} with ||(jA + B) x|| > c. Requires ||A x|| > c, c < 1/4.
int three_term_select(std::int64_t a, std::int64_t b, const RealDescriptor& x, const BigRational& c);

struct Lemma1Report {
  std::int64_t a_max = 0;
  std::int64_t b_max = 0;
  std::uint64_t pairs_checked = 0;      // pairs with ||A x|| > c
  std::uint64_t counterexamples = 0;
  std::array<std::uint64_t, 4> case_counts{};   // Cases 1..4 by signs of {Ax}-1/2, {(A+B)x}-1/2
  std::array<std::uint64_t, 3> index_counts{};  // which term first exceeds c
  std::optional<std::pair<std::int64_t, std::int64_t>> first_counterexample;
};

Lemma1Report lemma1_brute_check(const RealDescriptor& x, const BigRational& c, std::int64_t a_max,
                                std::int64_t b_max);

// --- constants ---------------------------------------------------------------

/// M/32 > 2 log_lambda(M) + 1, decided exactly as lambda^(M-32) > M^64.
bool branching_log_condition(std::int64_t m, const BigRational& lambda);
/// Smallest power of two M > 128 satisfying the log condition.
std::int64_t choose_M(const BigRational& lambda);

struct CChoice {
  BigRational c;       // 4^{-exponent}
  BigRational sqrt_c;  // 2^{-exponent}
  unsigned exponent = 0;
  BigInt scan_limit;   // M^2
  bool full_scan_passed = false;
};

/// Largest c = 4^{-m} with 3 c^{1/2} M^4 < 1, ||a x|| > c for a <= M^2, c < 1/4.
CChoice choose_c(const RealDescriptor& x, std::int64_t m);

struct ConstructionParams {
  RealDescriptor x;
  BigRational lambda;
  std::int64_t M = 0;
  BigRational c;
  BigRational sqrt_c;
  unsigned c_exponent = 0;
  Mode mode = Mode::feasible;
  std::size_t depth = 1;
  Enumeration enumeration = Enumeration::full;
  std::uint64_t seed = 0;
  std::size_t width = 1;
};

/// Derives M (unless given) and c, then checks the mode's constraints.
ConstructionParams make_params(const RealDescriptor& x, const BigRational& lambda, Mode mode, std::size_t depth,
                               Enumeration enumeration = Enumeration::full, std::uint64_t seed = 0,
                               std::size_t width = 1, std::optional<std::int64_t> m_override = std::nullopt);
/// Throws InvalidInput if the constants break the mode's requirements.
void validate_params(const ConstructionParams& p);

/// M^{-(2k+3)}
BigRational level_gap(const ConstructionParams& p, std::size_t k);
/// [c^{1/2} M^{2k}, c^{1/2} M^{2k+2})
std::pair<BigRational, BigRational> window(const ConstructionParams& p, std::size_t k);
/// Distinct convergent denominators of x inside window k, ascending.
std::vector<BigInt> window_denominators(const ConstructionParams& p, std::size_t k);
/// |S| <= 2 log_lambda(M) + 1, decided exactly as lambda^(|S|-1) <= M^2.
bool claim3_holds(std::size_t s_size, const ConstructionParams& p);

// --- levels ------------------------------------------------------------------

struct LevelInterval {
  NicenessCertificate cert;
  std::size_t parent = 0;  // index into the previous level; 0 for level 1 (E_0 = [0,1])

  const FundamentalInterval& interval() const { return cert.interval; }
};

struct StripHit {
  std::int64_t s;
  BigInt p;
  BigInt q;
};

/// What happened to one parent's candidates.
struct ParentReport {
  std::size_t parent = 0;
  std::size_t a_count = 0, b_count = 0, c_count = 0, e_count = 0;
  std::int64_t a_first = 0, a_last = -1;   // A filter keeps exactly s in [a_first, a_last]
  std::vector<std::int64_t> not_nice;       // B: evaluated and not nice
  std::vector<std::int64_t> redundant;      // B: later member of a triple that already had a nice one
  std::vector<std::int64_t> thinned;        // C: removed by every-other thinning
  std::vector<StripHit> strip_hits;         // E
  std::size_t max_strips_touching_parent = 0;  // must stay <= 1
  std::size_t max_children_per_strip = 0;      // must stay <= 1
};

struct LevelSet {
  std::size_t k = 0;
  std::vector<LevelInterval> intervals;
  BigRational eps;
  BigRational window_lo, window_hi;      // window k
  std::vector<BigInt> avoided;           // denominators whose strips this level avoids (window k-1)
  std::vector<ParentReport> reports;     // one per expanded parent
  std::vector<std::size_t> expanded_parents;
};

LevelSet build_base_level(const ConstructionParams& p);
/// Refines the listed parents of `prev` (all of them when `parents` is empty).
LevelSet refine_level(const LevelSet& prev, const ConstructionParams& p, std::vector<std::size_t> parents = {});

/// Per-parent refinement; exposed for tests and for sampled paths.
std::pair<std::vector<LevelInterval>, ParentReport> refine_parent(const LevelInterval& parent, std::size_t parent_index,
                                                                  std::size_t k, const ConstructionParams& p,
                                                                  const std::vector<BigInt>& window_qs);

struct ConditionResult {
  bool ok = true;
  std::string witness;  // first failure, empty when ok
};

struct ConditionReport {
  std::size_t k = 0;
  std::array<ConditionResult, 6> conditions;
  bool claim3 = true;
  std::size_t window_size = 0;
  std::size_t min_count = 0;

  bool all_pass() const;
};

/// Conditions 1-6 for level k. `prev` is E_{k-1}; null means E_0 = [0,1].
ConditionReport verify_level(const LevelSet& level, const ConstructionParams& p, const LevelSet* prev);

struct Construction {
  ConstructionParams params;
  std::vector<LevelSet> levels;  // E_1..E_depth
  std::vector<ConditionReport> reports;
};

/// Builds E_1..E_depth; sampled mode expands `width` seeded picks per level.
Construction build_construction(const ConstructionParams& p);

// --- points ------------------------------------------------------------------

struct ProductBound {
  std::string source;  // "x" or "y": whose convergent denominator
  std::size_t n;
  BigInt q;
  RationalEnclosure dist_x;
  RationalEnclosure dist_y;
  RationalEnclosure product;  // q ||q x|| ||q y||
};

struct PointCertificate {
  BigRational c;
  std::int64_t M = 0;
  FundamentalInterval y_interval;
  BigRational region_lo, region_hi;  // y_interval restricted to a next digit <= 2M
  std::vector<ConditionReport> level_reports;
  std::vector<ProductBound> products;
  BigRational c_x;   // min q||qx|| over certified x-denominators (0 if none)
  BigRational c_y;   // min q||qy|| over the region, y-denominators
  BigRational floor; // c * min(c_x, c_y)
};

PointCertificate sample_point(const ConstructionParams& p, std::size_t depth, std::uint64_t seed);
/// Re-checks a point certificate from its interval and x alone.
bool point_certificate_holds(const PointCertificate& cert, const RealDescriptor& x);

}  // namespace dioph
