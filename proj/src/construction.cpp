#include "dioph/construction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "dioph/errors.hpp"
#include "dioph/parallel.hpp"

namespace dioph {

namespace {

BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

BigInt m_pow(const ConstructionParams& p, std::size_t e) { return pow_int(big(p.M), static_cast<unsigned long>(e)); }

// Distinct picks from [0, n) in ascending order; partial Fisher-Yates with a
// plain modulo so the sequence is identical across standard libraries.
std::vector<std::size_t> pick_indices(std::mt19937_64& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  count = std::min(count, n);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::string digits_text(const std::vector<std::int64_t>& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + std::to_string(d[i]);
  return out + ")";
}

// Strip hits among `members` for every window denominator. Asserts the two
// geometric facts that bound how many children a strip can remove.
void apply_strip_filter(const FundamentalInterval& parent, std::vector<LevelInterval>& members,
                        const std::vector<BigInt>& window_qs, const ConstructionParams& p, ParentReport& report) {
  std::vector<bool> hit(members.size(), false);
  for (const auto& q : window_qs) {
    BigInt p_lo = ceil_of(q * parent.lo - p.c);
    BigInt p_hi = floor_of(q * parent.hi + p.c);
    if (p_hi < p_lo) continue;
    BigInt touching = p_hi - p_lo + 1;
    report.max_strips_touching_parent = std::max<std::size_t>(report.max_strips_touching_parent, touching.get_ui());
    if (touching > 1) {
      throw SoundnessError("strip bound violated: " + touching.get_str() + " strips of q=" + q.get_str() +
                           " meet parent " + digits_text(parent.digits));
    }
    BigRational strip_lo = (p_lo - p.c) / BigRational(q);
    BigRational strip_hi = (p_lo + p.c) / BigRational(q);
    std::size_t meets = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& iv = members[i].interval();
      if (iv.lo <= strip_hi && strip_lo <= iv.hi) {
        ++meets;
        if (!hit[i]) report.strip_hits.push_back({iv.digits.back(), p_lo, q});
        hit[i] = true;
      }
    }
    report.max_children_per_strip = std::max(report.max_children_per_strip, meets);
    if (meets > 1) {
      throw SoundnessError("strip of q=" + q.get_str() + " meets " + std::to_string(meets) + " thinned children of " +
                           digits_text(parent.digits));
    }
  }
  std::vector<LevelInterval> kept;
  kept.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!hit[i]) kept.push_back(std::move(members[i]));
  }
  members = std::move(kept);
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::strict ? "strict" : "feasible"; }
std::string to_string(Enumeration e) { return e == Enumeration::full ? "full" : "sample"; }

Mode parse_mode(std::string_view s) {
  if (s == "strict") return Mode::strict;
  if (s == "feasible") return Mode::feasible;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

Enumeration parse_enumeration(std::string_view s) {
  if (s == "full") return Enumeration::full;
  if (s == "sample" || s == "sampled") return Enumeration::sampled;
  throw ConfigError("unknown enumeration '" + std::string(s) + "'");
}

// --- constants ---------------------------------------------------------------

bool branching_log_condition(std::int64_t m, const BigRational& lambda) {
  if (lambda <= 1) throw InvalidInput("lambda must exceed 1");
  if (m <= 32) return false;
  // M/32 - 1 > 2 ln M / ln lambda  <=>  lambda^{(M-32)/g} > M^{64/g}
  auto g = static_cast<unsigned long>(std::gcd<std::int64_t>(m - 32, 64));
  auto lhs = pow_rational(lambda, static_cast<unsigned long>(m - 32) / g);
  auto rhs = pow_int(big(m), 64 / g);
  return lhs > BigRational(rhs);
}

std::int64_t choose_M(const BigRational& lambda) {
  if (lambda <= 1) throw InvalidInput("choose_M: lambda must exceed 1");
  for (int t = 8; t < 62; ++t) {
    std::int64_t m = std::int64_t{1} << t;
    if (branching_log_condition(m, lambda)) return m;
  }
  throw InvalidInput("choose_M: lambda too close to 1");
}

CChoice choose_c(const RealDescriptor& x, std::int64_t m) {
  if (m < 2) throw InvalidInput("choose_c: M must be >= 2");
  CChoice out;
  out.scan_limit = big(m) * big(m);
  const BigInt m4 = pow_int(big(m), 4);
  // Condition 1: 3 * 2^{-e} * M^4 < 1. Condition 3 (c < 1/4) needs e >= 2.
  unsigned e = 2;
  while (3 * m4 >= pow_int(2, e)) ++e;
  // Condition 2 reduces to the last convergent denominator <= M^2: every
  // a < q_{n+1} has ||a x|| >= ||q_n x||.
  std::size_t n = 0;
  while (x.convergent(n + 1).q <= out.scan_limit) ++n;
  const BigInt best = x.convergent(n).q;
  for (;; ++e) {
    BigRational c = make_rational(1, pow_int(4, e));
    if (decide_gt(best, x, c)) {
      out.c = c;
      out.sqrt_c = make_rational(1, pow_int(2, e));
      out.exponent = e;
      break;
    }
    if (e > 4096) throw Undecided("choose_c: no admissible c found");
  }
  auto verdicts = decide_gt_all(x, out.c, out.scan_limit.get_ui());
  out.full_scan_passed = std::all_of(verdicts.begin(), verdicts.end(), [](bool b) { return b; });
  if (!out.full_scan_passed) throw SoundnessError("choose_c: full scan disagrees with the convergent shortcut");
  return out;
}

void validate_params(const ConstructionParams& p) {
  if (p.lambda <= 1) throw InvalidInput("lambda must exceed 1");
  if (p.M < 2) throw InvalidInput("M must be >= 2");
  if (p.depth < 1) throw InvalidInput("depth must be >= 1");
  if (p.width < 1) throw InvalidInput("sample width must be >= 1");
  if (p.sqrt_c * p.sqrt_c != p.c) throw InvalidInput("c must be the square of sqrt_c");
  if (p.c <= 0 || p.c >= BigRational(1, 4)) throw InvalidInput("c must lie in (0, 1/4)");
  if (3 * p.sqrt_c * BigRational(m_pow(p, 4)) >= 1) throw InvalidInput("3 c^{1/2} M^4 < 1 fails");
  if (p.mode == Mode::strict) {
    if (p.M <= 128) throw InvalidInput("strict mode requires M > 128");
    if (!branching_log_condition(p.M, p.lambda)) throw InvalidInput("strict mode requires M/32 > 2 log_lambda(M) + 1");
    std::size_t n = 0;
    const BigInt limit = big(p.M) * big(p.M);
    while (p.x.convergent(n + 1).q <= limit) ++n;
    if (!decide_gt(p.x.convergent(n).q, p.x, p.c)) throw InvalidInput("strict mode requires ||a x|| > c for a <= M^2");
  }
}

ConstructionParams make_params(const RealDescriptor& x, const BigRational& lambda, Mode mode, std::size_t depth,
                               Enumeration enumeration, std::uint64_t seed, std::size_t width,
                               std::optional<std::int64_t> m_override) {
  ConstructionParams p{.x = x, .lambda = lambda, .M = 0, .c = {}, .sqrt_c = {}};
  p.mode = mode;
  p.depth = depth;
  p.enumeration = enumeration;
  p.seed = seed;
  p.width = width;
  if (m_override) {
    p.M = *m_override;
  } else {
    p.M = mode == Mode::strict ? choose_M(lambda) : 16;
  }
  auto cc = choose_c(x, p.M);
  p.c = cc.c;
  p.sqrt_c = cc.sqrt_c;
  p.c_exponent = cc.exponent;
  validate_params(p);
  return p;
}

BigRational level_gap(const ConstructionParams& p, std::size_t k) { return make_rational(1, m_pow(p, 2 * k + 3)); }

std::pair<BigRational, BigRational> window(const ConstructionParams& p, std::size_t k) {
  return {p.sqrt_c * BigRational(m_pow(p, 2 * k)), p.sqrt_c * BigRational(m_pow(p, 2 * k + 2))};
}

std::vector<BigInt> window_denominators(const ConstructionParams& p, std::size_t k) {
  auto [lo, hi] = window(p, k);
  std::vector<BigInt> out;
  for (std::size_t n = 0;; ++n) {
    const BigInt& q = p.x.convergent(n).q;
    if (BigRational(q) >= hi) break;
    if (BigRational(q) >= lo && (out.empty() || out.back() != q)) out.push_back(q);
  }
  return out;
}

bool claim3_holds(std::size_t s_size, const ConstructionParams& p) {
  if (s_size == 0) return true;
  return pow_rational(p.lambda, static_cast<unsigned long>(s_size - 1)) <= BigRational(m_pow(p, 2));
}

// --- levels ------------------------------------------------------------------

LevelSet build_base_level(const ConstructionParams& p) {
  validate_params(p);
  LevelSet level;
  level.k = 1;
  level.eps = level_gap(p, 1);
  std::tie(level.window_lo, level.window_hi) = window(p, 1);
  level.avoided = window_denominators(p, 0);
  level.expanded_parents = {0};

  ParentReport report;
  report.parent = 0;
  report.a_first = 1;
  report.a_last = p.M - 1;
  report.a_count = static_cast<std::size_t>(p.M - 1);
  std::vector<LevelInterval> members;
  for (std::int64_t a = 1; a <= p.M - 1; ++a) {
    if (a % 2 == 0) {
      report.thinned.push_back(a);
      continue;
    }
    std::vector<std::int64_t> digits{a};
    auto cert = is_nice(interval_of(digits), p.x, p.c);
    if (!cert.nice()) {
      if (p.mode == Mode::strict) {
        throw SoundnessError("base interval I(" + std::to_string(a) + ") is not nice under strict constants");
      }
      report.not_nice.push_back(a);
      continue;
    }
    members.push_back({std::move(cert), 0});
  }
  report.b_count = report.c_count = members.size();
  std::sort(members.begin(), members.end(),
            [](const LevelInterval& a, const LevelInterval& b) { return a.interval().lo < b.interval().lo; });
  FundamentalInterval unit;
  unit.lo = 0;
  unit.hi = 1;
  apply_strip_filter(unit, members, level.avoided, p, report);
  report.e_count = members.size();
  if (p.mode == Mode::strict && 4 * members.size() < static_cast<std::size_t>(p.M)) {
    throw SoundnessError("base level has fewer than M/4 intervals");
  }
  if (members.size() < 2) throw RefinementFailure("base level has fewer than two intervals");
  level.intervals = std::move(members);
  level.reports.push_back(std::move(report));
  return level;
}

std::pair<std::vector<LevelInterval>, ParentReport> refine_parent(const LevelInterval& parent, std::size_t parent_index,
                                                                  std::size_t k, const ConstructionParams& p,
                                                                  const std::vector<BigInt>& window_qs) {
  const auto& piv = parent.interval();
  if (!parent.cert.nice()) throw SoundnessError("refining a parent that is not nice: " + digits_text(piv.digits));
  ParentReport report;
  report.parent = parent_index;

  // A: q_{k+1,s} = s q_k + q_{k-1} is an arithmetic progression in s.
  const BigInt low = m_pow(p, k);
  const BigInt high = m_pow(p, k + 1);
  std::vector<std::int64_t> a_set;
  for (std::int64_t s = 1; s <= 2 * p.M; ++s) {
    BigInt q = big(s) * piv.conv.q + piv.conv.q_prev;
    if (q >= high) break;
    if (q >= low) a_set.push_back(s);
  }
  report.a_count = a_set.size();
  if (!a_set.empty()) {
    report.a_first = a_set.front();
    report.a_last = a_set.back();
  }

  // B: in each run of three consecutive candidates keep the first nice one.
  std::vector<LevelInterval> b_set;
  for (std::size_t start = 0; start < a_set.size(); start += 3) {
    std::size_t end = std::min(start + 3, a_set.size());
    bool found = false;
    for (std::size_t i = start; i < end; ++i) {
      std::int64_t s = a_set[i];
      if (found) {
        report.redundant.push_back(s);
        continue;
      }
      auto child = child_of(piv, s);
      if (decide_gt(child.conv.q, p.x, p.c)) {
        NicenessCertificate cert{child, parent.cert.c, parent.cert.x, parent.cert.verdicts};
        cert.verdicts.push_back({child.order(), child.conv.q, true});
        b_set.push_back({std::move(cert), parent_index});
        found = true;
      } else {
        report.not_nice.push_back(s);
      }
    }
    if (!found && end - start == 3) {
      throw SoundnessError("no nice child among s=" + std::to_string(a_set[start]) + ".." +
                           std::to_string(a_set[start] + 2) + " under " + digits_text(piv.digits));
    }
  }
  report.b_count = b_set.size();

  // C: every other interval in ascending position.
  std::sort(b_set.begin(), b_set.end(),
            [](const LevelInterval& a, const LevelInterval& b) { return a.interval().lo < b.interval().lo; });
  std::vector<LevelInterval> c_set;
  for (std::size_t i = 0; i < b_set.size(); ++i) {
    if (i % 2 == 0) {
      c_set.push_back(std::move(b_set[i]));
    } else {
      report.thinned.push_back(b_set[i].interval().digits.back());
    }
  }
  report.c_count = c_set.size();

  // E: avoid the strips of the window denominators.
  apply_strip_filter(piv, c_set, window_qs, p, report);
  report.e_count = c_set.size();

  const auto m = static_cast<std::size_t>(p.M);
  if (p.mode == Mode::strict) {
    auto fail = [&](const std::string& what) {
      throw SoundnessError(what + " under parent " + digits_text(piv.digits) + " (|A|=" +
                           std::to_string(report.a_count) + ", |B|=" + std::to_string(report.b_count) +
                           ", |C|=" + std::to_string(report.c_count) + ", |E|=" + std::to_string(report.e_count) + ")");
    };
    if (2 * report.a_count < m) fail("|A| < M/2");
    if (8 * report.b_count < m) fail("|B| < M/8");
    if (report.b_count < report.a_count / 3) fail("|B| < floor(|A|/3)");
    if (16 * report.c_count < m) fail("|C| < M/16");
    if (report.e_count + window_qs.size() < report.c_count) fail("|E| < |C| - |S|");
    if (32 * report.e_count <= m) fail("|E| <= M/32");
  } else if (report.e_count < 2) {
    throw RefinementFailure("parent " + digits_text(piv.digits) + " keeps only " + std::to_string(report.e_count) +
                            " children");
  }
  return {std::move(c_set), std::move(report)};
}

LevelSet refine_level(const LevelSet& prev, const ConstructionParams& p, std::vector<std::size_t> parents) {
  if (parents.empty()) {
    parents.resize(prev.intervals.size());
    std::iota(parents.begin(), parents.end(), 0);
  }
  std::sort(parents.begin(), parents.end());
  parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
  for (auto i : parents) {
    if (i >= prev.intervals.size()) throw InvalidInput("refine_level: parent index out of range");
  }
  const std::size_t k = prev.k;
  const auto window_qs = window_denominators(p, k);

  std::vector<std::pair<std::vector<LevelInterval>, ParentReport>> results(parents.size());
  parallel_for(parents.size(), [&](std::size_t i) {
    results[i] = refine_parent(prev.intervals[parents[i]], parents[i], k, p, window_qs);
  });

  LevelSet next;
  next.k = k + 1;
  next.eps = level_gap(p, k + 1);
  std::tie(next.window_lo, next.window_hi) = window(p, k + 1);
  next.avoided = window_qs;
  next.expanded_parents = parents;
  for (auto& [children, report] : results) {
    for (auto& c : children) next.intervals.push_back(std::move(c));
    next.reports.push_back(std::move(report));
  }
  return next;
}

bool ConditionReport::all_pass() const {
  return claim3 && std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.ok; });
}

ConditionReport verify_level(const LevelSet& level, const ConstructionParams& p, const LevelSet* prev) {
  ConditionReport rep;
  const std::size_t k = level.k;
  rep.k = k;
  auto fail = [&](int idx, std::string witness) {
    auto& c = rep.conditions[idx];
    if (c.ok) {
      c.ok = false;
      c.witness = std::move(witness);
    }
  };
  if ((prev == nullptr) != (k == 1)) throw InvalidInput("verify_level: previous level does not match k");

  const BigInt q_low = m_pow(p, k - 1);
  const BigInt q_high = m_pow(p, k);
  const auto window_qs = window_denominators(p, k - 1);
  rep.window_size = window_qs.size();
  rep.claim3 = claim3_holds(window_qs.size(), p);
  if (level.eps != level_gap(p, k)) fail(3, "recorded gap differs from M^{-(2k+3)}");

  std::map<std::size_t, std::vector<std::size_t>> by_parent;
  for (auto parent : level.expanded_parents) by_parent[parent];

  std::vector<std::string> failures(level.intervals.size());
  std::vector<std::array<bool, 6>> flags(level.intervals.size());
  parallel_for(level.intervals.size(), [&](std::size_t i) {
    const auto& li = level.intervals[i];
    const auto& iv = li.interval();
    auto& f = flags[i];
    f.fill(true);
    std::string& why = failures[i];
    auto note = [&](int idx, const std::string& w) {
      if (f[idx]) {
        f[idx] = false;
        if (why.empty()) why = w;
      }
    };
    const std::string name = digits_text(iv.digits);

    // 1: order, digit cap, denominator range.
    if (iv.order() != k) note(0, name + " has order " + std::to_string(iv.order()));
    for (auto d : iv.digits) {
      if (d > 2 * p.M) note(0, name + " has digit " + std::to_string(d) + " > 2M");
    }
    if (iv.conv.q < q_low || iv.conv.q >= q_high) note(0, name + " has q_k=" + iv.conv.q.get_str() + " out of range");

    // 2: unique parent.
    if (prev == nullptr) {
      if (li.parent != 0 || iv.lo < 0 || iv.hi > 1) note(1, name + " not inside [0,1]");
    } else if (li.parent >= prev->intervals.size()) {
      note(1, name + " has no recorded parent");
    } else {
      const auto& par = prev->intervals[li.parent].interval();
      bool prefix = std::equal(par.digits.begin(), par.digits.end(), iv.digits.begin()) &&
                    iv.digits.size() == par.digits.size() + 1;
      if (!prefix || !contains(par, iv)) note(1, name + " is not inside its parent " + digits_text(par.digits));
    }

    // 3: niceness, recomputed from scratch.
    auto qs = iv.associated_denominators();
    if (li.cert.verdicts.size() != qs.size() || li.cert.c != p.c) note(2, name + " certificate is incomplete");
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (j < li.cert.verdicts.size() && li.cert.verdicts[j].q_k != qs[j]) note(2, name + " certificate has wrong q");
      if (!decide_gt(qs[j], p.x, p.c)) note(2, name + " is not nice at q=" + qs[j].get_str());
    }

    // 5: strips of the avoided window.
    for (const auto& q : window_qs) {
      if (min_dist_on_interval(q, iv.lo, iv.hi) <= p.c) note(4, name + " meets a strip of q=" + q.get_str());
    }
  });
  for (std::size_t i = 0; i < level.intervals.size(); ++i) {
    for (int c = 0; c < 6; ++c) {
      if (!flags[i][c]) fail(c, failures[i]);
    }
    by_parent[level.intervals[i].parent].push_back(i);
  }

  // 4 and 6: per-parent gaps and counts.
  rep.min_count = by_parent.empty() ? 0 : static_cast<std::size_t>(-1);
  for (auto& [parent, members] : by_parent) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return level.intervals[a].interval().lo < level.intervals[b].interval().lo;
    });
    for (std::size_t j = 1; j < members.size(); ++j) {
      const auto& a = level.intervals[members[j - 1]].interval();
      const auto& b = level.intervals[members[j]].interval();
      if (gap(a, b) < level.eps) {
        fail(3, digits_text(a.digits) + " and " + digits_text(b.digits) + " are closer than eps_k");
      }
    }
    rep.min_count = std::min(rep.min_count, members.size());
    bool enough = p.mode == Mode::strict ? 32 * members.size() > static_cast<std::size_t>(p.M) : members.size() >= 2;
    if (!enough) fail(5, "parent " + std::to_string(parent) + " keeps " + std::to_string(members.size()) + " intervals");
  }
  return rep;
}

Construction build_construction(const ConstructionParams& p) {
  validate_params(p);
  Construction out{p, {}, {}};
  std::mt19937_64 rng(p.seed);
  out.levels.push_back(build_base_level(p));
  out.reports.push_back(verify_level(out.levels.back(), p, nullptr));
  for (std::size_t k = 1; k < p.depth; ++k) {
    const auto& prev = out.levels.back();
    std::vector<std::size_t> parents;
    if (p.enumeration == Enumeration::sampled) parents = pick_indices(rng, prev.intervals.size(), p.width);
    auto next = refine_level(prev, p, parents);
    out.levels.push_back(std::move(next));
    out.reports.push_back(verify_level(out.levels.back(), p, &out.levels[out.levels.size() - 2]));
  }
  return out;
}

// --- points ------------------------------------------------------------------

namespace {

// Part of I(a_1..a_k) whose next digit is at most 2M: the union of the
// children s = 1..2M, which excludes the rational endpoint p_k/q_k.
std::pair<BigRational, BigRational> capped_region(const FundamentalInterval& iv, std::int64_t m) {
  const auto& c = iv.conv;
  BigRational outer = make_rational(c.p + c.p_prev, c.q + c.q_prev);
  BigInt s = big(2 * m + 1);
  BigRational inner = make_rational(s * c.p + c.p_prev, s * c.q + c.q_prev);
  if (outer > inner) std::swap(outer, inner);
  return {outer, inner};
}

}  // namespace

PointCertificate sample_point(const ConstructionParams& params, std::size_t depth, std::uint64_t seed) {
  if (depth < 1) throw InvalidInput("sample_point: depth must be >= 1");
  ConstructionParams p = params;
  p.depth = depth;
  p.enumeration = Enumeration::sampled;
  p.width = 1;
  p.seed = seed;
  validate_params(p);

  PointCertificate cert;
  cert.c = p.c;
  cert.M = p.M;
  std::mt19937_64 rng(seed);
  LevelSet level = build_base_level(p);
  cert.level_reports.push_back(verify_level(level, p, nullptr));
  for (std::size_t k = 1; k < depth; ++k) {
    auto pick = pick_indices(rng, level.intervals.size(), 1);
    LevelSet next = refine_level(level, p, pick);
    cert.level_reports.push_back(verify_level(next, p, &level));
    level = std::move(next);
  }
  auto final_pick = pick_indices(rng, level.intervals.size(), 1).front();
  cert.y_interval = level.intervals[final_pick].interval();
  std::tie(cert.region_lo, cert.region_hi) = capped_region(cert.y_interval, p.M);

  auto dist_y = [&](const BigInt& q) {
    return RationalEnclosure{min_dist_on_interval(q, cert.region_lo, cert.region_hi),
                             max_dist_on_interval(q, cert.region_lo, cert.region_hi)};
  };

  bool have_x = false;
  // Denominators of x whose windows were consumed on the way down.
  const BigRational covered = window(p, depth - 1).second;
  for (std::size_t n = 0;; ++n) {
    const BigInt& q = p.x.convergent(n).q;
    if (BigRational(q) >= covered) break;
    if (n > 0 && q == p.x.convergent(n - 1).q) continue;
    ProductBound b{"x", n, q, positive_dist_enclosure(q, p.x), dist_y(q), {}};
    if (b.dist_y.lo <= p.c) throw SoundnessError("sampled point meets a strip of q=" + q.get_str());
    b.product = scale(b.dist_x * b.dist_y, BigRational(q));
    BigRational qx = q * b.dist_x.lo;
    if (!have_x || qx < cert.c_x) cert.c_x = qx;
    have_x = true;
    cert.products.push_back(std::move(b));
  }
  auto qs = cert.y_interval.associated_denominators();
  for (std::size_t n = 0; n < qs.size(); ++n) {
    const BigInt& q = qs[n];
    ProductBound b{"y", n + 1, q, enclosure_above(q, p.x, p.c), dist_y(q), {}};
    b.product = scale(b.dist_x * b.dist_y, BigRational(q));
    BigRational qy = q * b.dist_y.lo;
    if (n == 0 || qy < cert.c_y) cert.c_y = qy;
    cert.products.push_back(std::move(b));
  }
  BigRational base = have_x && cert.c_x < cert.c_y ? cert.c_x : cert.c_y;
  cert.floor = p.c * base;
  return cert;
}

bool point_certificate_holds(const PointCertificate& cert, const RealDescriptor& x) {
  auto iv = interval_of(cert.y_interval.digits);
  auto [lo, hi] = capped_region(iv, cert.M);
  if (lo != cert.region_lo || hi != cert.region_hi) return false;
  if (cert.floor <= 0) return false;
  for (const auto& b : cert.products) {
    if (b.dist_y.lo != min_dist_on_interval(b.q, lo, hi) || b.dist_y.hi != max_dist_on_interval(b.q, lo, hi)) {
      return false;
    }
    // ||q x|| is irrational, so membership in the enclosure is two strict decisions.
    if (!decide_gt(b.q, x, b.dist_x.lo) || decide_gt(b.q, x, b.dist_x.hi)) return false;
    auto product = scale(b.dist_x * b.dist_y, BigRational(b.q));
    if (product.lo != b.product.lo || product.hi != b.product.hi) return false;
    if (!(b.product.lo > cert.floor)) return false;
    if (b.source == "y" && !(b.dist_x.lo > cert.c)) return false;
    if (b.source == "x" && !(b.dist_y.lo > cert.c)) return false;
  }
  return true;
}

}  // namespace dioph
