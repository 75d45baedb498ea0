#pragma once

/**
 * Exact arithmetic layer.
 *
 * Integers and rationals are GMP values. Irrationals are never materialised:
 * a RealDescriptor is a replayable stream of partial quotients, and every
 * statement about such a number (||q x|| > c, {q x} < 1/2, ...) is decided by
 * enclosing it between rationals built from deep convergents and refining
 * until the enclosure excludes the threshold. Rational thresholds can never
 * coincide with an irrational value, so refinement terminates on well-formed
 * descriptors.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace dioph {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Canonical num/den with den > 0 and gcd 1. Throws InvalidInput on den == 0.
BigRational make_rational(const BigInt& num, const BigInt& den);

/// "num/den" (always with a denominator, also for integers).
std::string to_string(const BigRational& r);
std::string to_string(const BigInt& z);
/// Accepts "n", "n/d" with optional sign; throws InvalidInput.
BigRational parse_rational(std::string_view text);
BigInt parse_integer(std::string_view text);

BigInt floor_of(const BigRational& r);
BigInt ceil_of(const BigRational& r);
/// Exact distance from r to the nearest integer.
BigRational dist_to_int(const BigRational& r);
/// Exact min over t in [lo, hi] of ||q t||.
BigRational min_dist_on_interval(const BigInt& q, const BigRational& lo, const BigRational& hi);
/// Exact max over t in [lo, hi] of ||q t||.
BigRational max_dist_on_interval(const BigInt& q, const BigRational& lo, const BigRational& hi);
/// Floor of the square root for n >= 0.
BigInt isqrt(const BigInt& n);
BigInt pow_int(const BigInt& base, unsigned long exp);
BigRational pow_rational(const BigRational& base, unsigned long exp);

/// Closed interval [lo, hi] known to contain some real quantity.
struct RationalEnclosure {
  BigRational lo;
  BigRational hi;

  BigRational width() const { return hi - lo; }
  bool contains(const BigRational& r) const { return lo <= r && r <= hi; }
};

RationalEnclosure operator+(const RationalEnclosure& a, const RationalEnclosure& b);
RationalEnclosure operator-(const RationalEnclosure& a, const RationalEnclosure& b);
RationalEnclosure operator*(const RationalEnclosure& a, const RationalEnclosure& b);
/// Requires b to exclude zero.
RationalEnclosure operator/(const RationalEnclosure& a, const RationalEnclosure& b);
RationalEnclosure scale(const RationalEnclosure& a, const BigRational& k);

/// p_n/q_n together with the previous convergent.
struct ConvergentPair {
  std::size_t n = 0;
  BigInt p;
  BigInt q;
  BigInt p_prev;
  BigInt q_prev;
};

/// Next convergent from the current one and the digit a_{n+1}.
ConvergentPair advance(const ConvergentPair& c, const BigInt& digit);
/// Convergent of index 0 for integer part a0 (p_{-1} = 1, q_{-1} = 0).
ConvergentPair initial_convergent(const BigInt& a0);

/// An irrational number given by its continued-fraction digits.
///
/// Copies share one append-only convergent cache, which is safe to read and
/// extend from several threads.
class RealDescriptor {
 public:
  using DigitRule = std::function<std::int64_t(std::size_t)>;

  /// [a0; prefix..., (period...)^inf]. The period must be non-empty.
  static RealDescriptor periodic(BigInt a0, std::vector<std::int64_t> prefix,
                                 std::vector<std::int64_t> period);
  /// Digits a_n = rule(n) for n >= 1. The rule must be pure.
  static RealDescriptor generated(BigInt a0, DigitRule rule, std::optional<std::int64_t> bound,
                                  std::string label);
  /// `cf: a0; a1 a2 ... (period: b1 ... bm)`; "(b1 b2)" is accepted for the tail too.
  static RealDescriptor parse(std::string_view text);

  static RealDescriptor sqrt2();
  static RealDescriptor golden();

  RealDescriptor(const RealDescriptor&) = default;
  RealDescriptor& operator=(const RealDescriptor&) = default;

  const BigInt& a0() const;
  /// a_n for n >= 1; throws MalformedDescriptor on a digit < 1 or above the bound.
  std::int64_t digit(std::size_t n) const;
  std::optional<std::int64_t> digit_bound() const;
  /// Canonical descriptor text, or the generator label.
  std::string text() const;
  bool is_periodic() const;

  const ConvergentPair& convergent(std::size_t n) const;
  /// Smallest index n with q_n >= bound.
  std::size_t first_index_with_q_at_least(const BigInt& bound) const;

 private:
  struct Impl;
  explicit RealDescriptor(std::shared_ptr<Impl> impl);
  std::shared_ptr<Impl> impl_;
};

/// Precision refinements attempted before a comparison is declared undecided.
inline constexpr int kRefinementCap = 256;

std::vector<BigInt> cf_digits(const RealDescriptor& x, std::size_t n);
ConvergentPair convergents(const RealDescriptor& x, std::size_t n);

/// Enclosure of ||q x|| of width <= eps.
RationalEnclosure dist_enclosure(const BigInt& q, const RealDescriptor& x, const BigRational& eps);
/// Enclosure of ||q x|| with a strictly positive lower end.
RationalEnclosure positive_dist_enclosure(const BigInt& q, const RealDescriptor& x);
/// Exact truth of ||q x|| > c.
bool decide_gt(const BigInt& q, const RealDescriptor& x, const BigRational& c);
/// Enclosure of ||q x|| whose lower end is > c; requires ||q x|| > c.
RationalEnclosure enclosure_above(const BigInt& q, const RealDescriptor& x, const BigRational& c);
/// Exact truth of {q x} < 1/2.
bool frac_below_half(const BigInt& q, const RealDescriptor& x);

/// Certified decisions for every a in [1, n_max], batched over one deep
/// convergent. Entry a-1 answers the question for a.
std::vector<bool> decide_gt_all(const RealDescriptor& x, const BigRational& c, std::size_t n_max);
std::vector<bool> frac_below_half_all(const RealDescriptor& x, std::size_t n_max);

/// Euclidean expansion; the last digit is >= 2 unless the expansion has one digit.
std::vector<BigInt> cf_of_rational(const BigRational& r);
BigRational evaluate_cf(const std::vector<BigInt>& digits);

/// min over 1 <= n <= depth of q_n / q_{n-1} (raw minimum, windows start at first).
BigRational lacunarity_lower_bound(const RealDescriptor& x, std::size_t depth, std::size_t first = 1);
/// 1 + 1/(B+1): a lower bound on q_n/q_{n-1} for n >= 2 when all digits are <= B.
BigRational lacunarity_from_digit_bound(std::int64_t bound);

}  // namespace dioph
