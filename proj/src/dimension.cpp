#include "dioph/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "dioph/certified_log.hpp"
#include "dioph/errors.hpp"

namespace dioph {

namespace {

RationalEnclosure min_of(const RationalEnclosure& a, const RationalEnclosure& b) {
  return {a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
}

// log2 of a power of two, or -1.
long exact_log2(std::int64_t v) {
  if (v <= 0 || (v & (v - 1)) != 0) return -1;
  long t = 0;
  while ((std::int64_t{1} << t) != v) ++t;
  return t;
}

}  // namespace

FalconerReport falconer_bound(const CountSequence& m, const GapSequence& eps, std::size_t K, std::size_t stride) {
  if (K < 2) throw InvalidInput("falconer_bound: K must be >= 2");
  FalconerReport out;
  out.K = K;
  out.stride = stride;
  out.tail_start = std::max<std::size_t>(2, K / 2);

  RationalEnclosure log_prod{0, 0};  // log(m_1 ... m_{k-1})
  BigRational prev_eps;
  bool have_tail = false;
  for (std::size_t k = 1; k <= K; ++k) {
    BigInt mk = m(k);
    BigRational ek = eps(k);
    if (mk < 2) throw InvalidInput("falconer_bound: m_" + std::to_string(k) + " < 2");
    if (ek <= 0) throw InvalidInput("falconer_bound: eps_" + std::to_string(k) + " <= 0");
    if (k > 1 && !(ek < prev_eps)) throw InvalidInput("falconer_bound: eps not strictly decreasing at k=" + std::to_string(k));
    BigRational prod = mk * ek;
    if (prod >= 1) throw InvalidInput("falconer_bound: m_k eps_k >= 1 at k=" + std::to_string(k));

    const bool wanted = k >= out.tail_start || k == K || (stride != 0 && k % stride == 0);
    if (wanted) {
      RationalEnclosure denom = ln_enclosure(prod);
      denom = {-denom.hi, -denom.lo};
      RationalEnclosure value = log_prod / denom;
      if (k >= out.tail_start) {
        out.tail_min = have_tail ? min_of(out.tail_min, value) : value;
        have_tail = true;
      }
      if (k == K) out.at_K = value;
      if ((stride != 0 && k % stride == 0) || k == K) out.samples.push_back({k, mk, ek, value});
    }
    log_prod = log_prod + ln_enclosure(BigRational(mk));
    prev_eps = ek;
  }
  return out;
}

CountSequence construction_counts(std::int64_t M) {
  if (M < 64) throw InvalidInput("construction_counts: M/32 must be >= 2");
  BigInt v = BigInt(static_cast<long>(M / 32));
  return [v](std::size_t) { return v; };
}

GapSequence construction_gaps(std::int64_t M) {
  if (M < 2) throw InvalidInput("construction_gaps: M must be >= 2");
  BigInt base = BigInt(static_cast<long>(M));
  return [base](std::size_t k) { return make_rational(1, pow_int(base, 2 * k + 3)); };
}

DimensionBound dimension_bound(std::int64_t M) {
  if (M <= 32) throw InvalidInput("dimension_bound: M must exceed 32");
  DimensionBound out;
  out.M = M;
  if (long t = exact_log2(M); t > 0) {
    BigRational v = make_rational(t - 5, 2 * t);
    out.value = {v, v};
    out.exact = true;
    return out;
  }
  auto num = ln_enclosure(make_rational(M, 32));
  auto den = ln_enclosure(BigRational(static_cast<long>(M)));
  out.value = scale(num / den, BigRational(1, 2));
  return out;
}

Corollary1 corollary1(const DimensionBound& fiber, const BigRational& dim_bad) {
  Corollary1 out;
  out.fiber = fiber.value;
  out.dim_bad = dim_bad;
  out.total = {fiber.value.lo + dim_bad, fiber.value.hi + dim_bad};
  out.limit = BigRational(1, 2) + dim_bad;
  return out;
}

DimensionReport dimension_report(std::int64_t M, std::size_t K, std::size_t stride) {
  DimensionReport out;
  out.M = M;
  out.closed_form = dimension_bound(M);
  out.falconer = falconer_bound(construction_counts(M), construction_gaps(M), K, stride);
  out.corollary = corollary1(out.closed_form);
  return out;
}

BoxCountResult box_count(std::vector<std::pair<BigRational, BigRational>> intervals) {
  if (intervals.empty()) throw InvalidInput("box_count: no intervals");
  for (auto& [lo, hi] : intervals) {
    if (hi < lo) std::swap(lo, hi);
  }
  std::sort(intervals.begin(), intervals.end());
  BoxCountResult out;
  out.degenerate = intervals.size() < 2;

  BigRational span = intervals.back().second - intervals.front().first;
  BigRational shortest = intervals.front().second - intervals.front().first;
  for (const auto& [lo, hi] : intervals) shortest = std::min<BigRational>(shortest, hi - lo);
  if (span <= 0 || shortest <= 0) throw InvalidInput("box_count: intervals must have positive length");

  // Scales from just below the total span down to the shortest interval.
  int j_lo = std::max(0, static_cast<int>(std::floor(std::log2(1 / span.get_d()))) + 1);
  int j_hi = static_cast<int>(std::floor(std::log2(1 / shortest.get_d())));
  if (out.degenerate || j_hi < j_lo + 1) j_hi = j_lo + 8;

  for (int j = j_lo; j <= j_hi; ++j) {
    BigInt scale_j = pow_int(2, static_cast<unsigned long>(j));
    std::size_t count = 0;
    BigInt last;  // last box index counted
    bool any = false;
    for (const auto& [lo, hi] : intervals) {
      BigInt first = floor_of(lo * scale_j);
      BigInt end = ceil_of(hi * scale_j) - 1;
      if (end < first) end = first;
      if (any && first <= last) first = last + 1;
      if (first <= end) {
        count += BigInt(end - first + 1).get_ui();
        last = end;
        any = true;
      }
    }
    out.points.emplace_back(j, count);
  }

  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [j, count] : out.points) {
    double xv = j * std::log(2.0);
    double yv = std::log(static_cast<double>(count));
    n += 1;
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

BoxCountResult box_count_diagnostic(const std::vector<LevelSet>& levels) {
  if (levels.size() < 2) throw InvalidInput("box_count_diagnostic: needs at least two levels");
  std::vector<std::pair<BigRational, BigRational>> ivs;
  for (const auto& li : levels.back().intervals) ivs.emplace_back(li.interval().lo, li.interval().hi);
  if (ivs.empty()) throw InvalidInput("box_count_diagnostic: deepest level is empty");
  return box_count(std::move(ivs));
}

}  // namespace dioph
