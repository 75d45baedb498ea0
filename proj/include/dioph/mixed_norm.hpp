#pragma once

// D-adic pseudo-norms: t_n = d_1 ... d_n, omega_D(q) = max{n : t_n | q},
// |q|_D = 1/t_{omega_D(q)}.

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "dioph/exact_arith.hpp"

namespace dioph {

class DSequence {
 public:
  enum class Kind { constant, periodic, explicit_list };

  static DSequence constant(std::int64_t d);
  static DSequence periodic(std::vector<std::int64_t> block);
  static DSequence explicit_list(std::vector<std::int64_t> head, std::int64_t tail);
  /// `const:2`, `period:2,3`, `list:2,3,5;tail=2`.
  static DSequence parse(std::string_view text);

  Kind kind() const { return kind_; }
  /// d_k for k >= 1.
  std::int64_t d(std::size_t k) const;
  std::string text() const;

 private:
  DSequence(Kind kind, std::vector<std::int64_t> values, std::int64_t tail);
  Kind kind_;
  std::vector<std::int64_t> values_;
  std::int64_t tail_ = 0;
};

/// Append-only cache of t_0..t_N.
class TnTable {
 public:
  explicit TnTable(DSequence seq);
  BigInt at(std::size_t n);
  const DSequence& sequence() const { return seq_; }

 private:
  DSequence seq_;
  std::vector<BigInt> t_;
  std::mutex mu_;
};

BigInt t_n(const DSequence& seq, std::size_t n);
std::size_t omega_D(const DSequence& seq, const BigInt& q);
BigRational d_norm(const DSequence& seq, const BigInt& q);
/// Enclosure of q |q|_D ||q x|| of width <= eps.
RationalEnclosure mixed_product_enclosure(const BigInt& q, const RealDescriptor& x, const DSequence& seq,
                                          const BigRational& eps);

/// Finite-depth evidence for the three factors of the set whose members
/// satisfy both mixed inequalities: lacunary avoidance (B), bounded D-norm of
/// convergent denominators (C) and bounded digits (Bad).
struct MembershipEvidence {
  BigRational b_floor;  // certified lower bound of min_{1<=n<=depth} ||t_n x||
  BigRational c_floor;  // min_{1<=n<=depth} |q_n(x)|_D
  std::int64_t max_digit = 0;
  std::size_t depth = 0;
};

MembershipEvidence membership_evidence(const RealDescriptor& x, const DSequence& seq, std::size_t depth);

}  // namespace dioph
