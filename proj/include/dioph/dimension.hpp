#pragma once

// Lower-bound evaluators for Cantor-type constructions and a box-counting
// diagnostic. Nothing here computes a Hausdorff dimension.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "dioph/construction.hpp"
#include "dioph/exact_arith.hpp"

namespace dioph {

using CountSequence = std::function<BigInt(std::size_t)>;      // k -> m_k, k >= 1
using GapSequence = std::function<BigRational(std::size_t)>;   // k -> eps_k, k >= 1

struct FalconerSample {
  std::size_t k;
  BigInt m;
  BigRational eps;
  RationalEnclosure value;
};

struct FalconerReport {
  std::size_t K = 0;
  std::size_t stride = 0;
  RationalEnclosure at_K;       // log(m_1...m_{K-1}) / -log(m_K eps_K)
  std::size_t tail_start = 0;   // the minimum below is over k in [tail_start, K]
  RationalEnclosure tail_min;
  std::vector<FalconerSample> samples;  // every `stride`-th k, plus k = K
};

/// Certified log(m_1...m_{k-1}) / -log(m_k eps_k) at k = K, with the minimum
/// over the tail k >= K/2. Requires m_k >= 2, eps strictly decreasing and
/// m_k eps_k < 1. `stride` = 0 records no samples.
FalconerReport falconer_bound(const CountSequence& m, const GapSequence& eps, std::size_t K, std::size_t stride = 0);

/// The construction's own sequences: m_k = M/32, eps_k = M^{-(2k+3)}.
CountSequence construction_counts(std::int64_t M);
GapSequence construction_gaps(std::int64_t M);

struct DimensionBound {
  std::int64_t M = 0;
  RationalEnclosure value;  // (1/2) log(M/32) / log(M)
  bool exact = false;       // lo == hi, M a power of two
};

/// Requires M > 32.
DimensionBound dimension_bound(std::int64_t M);

struct Corollary1 {
  RationalEnclosure fiber;   // lower bound for the fibers A(x)
  BigRational dim_bad;       // cited input, 1 for Bad
  RationalEnclosure total;   // fiber + dim_bad
  BigRational limit;         // 1/2 + dim_bad as M grows
};

Corollary1 corollary1(const DimensionBound& fiber, const BigRational& dim_bad = 1);

struct DimensionReport {
  std::int64_t M = 0;
  DimensionBound closed_form;
  FalconerReport falconer;
  Corollary1 corollary;
};

DimensionReport dimension_report(std::int64_t M, std::size_t K, std::size_t stride = 0);

struct BoxCountResult {
  std::vector<std::pair<int, std::size_t>> points;  // (j, N(2^-j))
  double slope = 0;
  bool degenerate = false;  // fewer than two intervals
};

/// Least-squares slope of log N(delta) against -log delta, delta = 2^-j, for
/// the union of closed intervals. Diagnostic only.
BoxCountResult box_count(std::vector<std::pair<BigRational, BigRational>> intervals);
/// Box count of the deepest level; requires at least two levels.
BoxCountResult box_count_diagnostic(const std::vector<LevelSet>& levels);

}  // namespace dioph
