#include "dioph/construction.hpp"
#include "dioph/errors.hpp"

namespace dioph {

int three_term_select(std::int64_t a, std::int64_t b, const RealDescriptor& x, const BigRational& c) {
  if (a < 1 || b < 1) throw InvalidInput("three_term_select: A and B must be positive");
  if (c >= BigRational(1, 4)) throw InvalidInput("three_term_select: c must be < 1/4");
  if (!decide_gt(BigInt(static_cast<long>(a)), x, c)) {
    throw InvalidInput("three_term_select: precondition ||A x|| > c fails for A=" + std::to_string(a));
  }
  for (int j = 1; j <= 3; ++j) {
    if (decide_gt(BigInt(static_cast<long>(j * a + b)), x, c)) return j;
  }
  throw SoundnessError("three-term avoidance violated at A=" + std::to_string(a) + ", B=" + std::to_string(b));
}

Lemma1Report lemma1_brute_check(const RealDescriptor& x, const BigRational& c, std::int64_t a_max,
                                std::int64_t b_max) {
  if (c <= 0 || c >= BigRational(1, 4)) throw InvalidInput("lemma1_brute_check: c must lie in (0, 1/4)");
  if (a_max < 1 || b_max < 1) throw InvalidInput("lemma1_brute_check: bounds must be positive");
  Lemma1Report report;
  report.a_max = a_max;
  report.b_max = b_max;

  const auto n_gt = static_cast<std::size_t>(3 * a_max + b_max);
  const auto n_half = static_cast<std::size_t>(a_max + b_max);
  const auto gt = decide_gt_all(x, c, n_gt);
  const auto below_half = frac_below_half_all(x, n_half);

  for (std::int64_t a = 1; a <= a_max; ++a) {
    if (!gt[a - 1]) continue;
    const bool a_low = below_half[a - 1];
    for (std::int64_t b = 1; b <= b_max; ++b) {
      ++report.pairs_checked;
      const bool b_low = below_half[a + b - 1];
      int which_case = a_low ? (b_low ? 0 : 3) : (b_low ? 2 : 1);
      ++report.case_counts[which_case];
      int index = 0;
      for (int j = 1; j <= 3 && index == 0; ++j) {
        if (gt[j * a + b - 1]) index = j;
      }
      if (index == 0) {
        ++report.counterexamples;
        if (!report.first_counterexample) report.first_counterexample = std::make_pair(a, b);
      } else {
        ++report.index_counts[index - 1];
      }
    }
  }
  return report;
}

}  // namespace dioph
