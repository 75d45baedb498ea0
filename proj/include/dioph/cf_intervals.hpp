#pragma once

// Fundamental intervals of the unit interval (a_0 = 0): the closed set of
// reals whose continued fraction begins with a fixed digit block.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dioph/exact_arith.hpp"
#include "json.hpp"

namespace dioph {

struct FundamentalInterval {
  std::vector<std::int64_t> digits;  // a_1..a_n
  ConvergentPair conv;               // p_n/q_n and p_{n-1}/q_{n-1}
  BigRational lo;
  BigRational hi;

  std::size_t order() const { return digits.size(); }
  BigRational length() const { return hi - lo; }
  /// 1/(q_n (q_n + q_{n-1})), from the convergents rather than the endpoints.
  BigRational length_formula() const;
  /// q_1..q_n.
  std::vector<BigInt> associated_denominators() const;
};

FundamentalInterval interval_of(std::span<const std::int64_t> digits);
FundamentalInterval child_of(const FundamentalInterval& parent, std::int64_t s);
/// I(a_1..a_k, s) for s = 1..s_max, ordered by s.
std::vector<FundamentalInterval> children(const FundamentalInterval& parent, std::int64_t s_max);

bool contains(const FundamentalInterval& interval, const BigRational& r);
bool contains(const FundamentalInterval& outer, const FundamentalInterval& inner);
/// Distance between two closed intervals; zero if they touch or overlap.
BigRational gap(const FundamentalInterval& a, const FundamentalInterval& b);
BigRational gap(const BigRational& lo1, const BigRational& hi1, const BigRational& lo2, const BigRational& hi2);
bool interiors_disjoint(const FundamentalInterval& a, const FundamentalInterval& b);

struct NicenessVerdict {
  std::size_t k;
  BigInt q_k;
  bool ok;
};

/// Verdicts on ||q_k x|| > c for every associated denominator.
struct NicenessCertificate {
  FundamentalInterval interval;
  BigRational c;
  std::string x;
  std::vector<NicenessVerdict> verdicts;

  bool nice() const;
};

NicenessCertificate is_nice(const FundamentalInterval& interval, const RealDescriptor& x, const BigRational& c);
/// Certificate for a child given the parent's certificate: only q_{k+1} is new.
NicenessCertificate extend_niceness(const NicenessCertificate& parent, const FundamentalInterval& child,
                                    const RealDescriptor& x);

nlohmann::ordered_json to_json(const FundamentalInterval& interval);
nlohmann::ordered_json to_json(const NicenessCertificate& cert);
FundamentalInterval interval_from_json(const nlohmann::ordered_json& j);
NicenessCertificate certificate_from_json(const nlohmann::ordered_json& j);

}  // namespace dioph
