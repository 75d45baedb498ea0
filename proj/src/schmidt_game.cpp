#include "dioph/schmidt_game.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "dioph/errors.hpp"

namespace dioph {

using json = nlohmann::ordered_json;

BigRational distance(const BigRational& r, const Interval& iv) {
  if (r < iv.lo) return iv.lo - r;
  if (r > iv.hi) return r - iv.hi;
  return 0;
}

// --- constants ---------------------------------------------------------------

BigRational StrategyConstants::V(std::size_t s) const {
  return pow_rational(R, static_cast<unsigned long>(s + 2)) / BigRational(M);
}

std::pair<BigInt, BigInt> StrategyConstants::level_range(std::size_t s) const {
  BigInt first = ceil_of(V(s));
  if (first < 1) first = 1;
  BigInt last = ceil_of(V(s + 1)) - 1;
  return {first, last};
}

StrategyConstants derive_constants(const BigRational& beta, const DSequence& D,
                                   const std::optional<BigRational>& threshold) {
  if (beta <= 0 || beta >= 1) throw InvalidInput("beta must lie in (0, 1)");
  StrategyConstants k;
  k.beta = beta;
  k.R = BigRational(2) / beta;
  k.threshold = threshold ? *threshold : pow_rational(k.R, 8) + 2 * k.R * k.R;
  if (k.threshold < 0) throw InvalidInput("threshold must be nonnegative");
  TnTable table(D);
  std::size_t n = 0;
  while (BigRational(table.at(n)) <= k.threshold) ++n;
  k.N = n;
  k.M = table.at(n);
  if (k.V(1) > 1) throw InvalidInput("threshold too small: V_1 > 1 makes T_0 nonempty");
  return k;
}

// --- danger strips -----------------------------------------------------------

BigInt DangerSet::strip_count() const {
  BigInt total = 0;
  for (const auto& f : families) total += f.count();
  return total;
}

namespace {

// Largest k with the strip of P k / (Q k M) reaching a point at distance
// `dist` from its center: (QkM)^2 dist <= 1.
BigInt reach_limit(const BigRational& dist, const BigInt& Q, const BigInt& M) {
  BigRational x = BigRational(1) / (dist * BigRational(Q * Q * M * M));
  return isqrt(floor_of(x));
}

// All reduced P/Q in [L, U] with Q <= N, by Stern-Brocot descent. Runs of
// mediants on one side of the target range are skipped in one step.
std::vector<std::pair<BigInt, BigInt>> fractions_in(const BigRational& L, const BigRational& U, const BigInt& N) {
  std::vector<std::pair<BigInt, BigInt>> out;
  if (U < L || N < 1) return out;
  BigInt first = floor_of(L);
  BigInt last = floor_of(U);
  if (last - first > 1000000) throw InvalidInput("danger enumeration range too wide");
  struct Node {
    BigInt a, b, c, d;  // a/b < c/d, bc - ad = 1
  };
  std::vector<Node> stack;
  for (BigInt z = first; z <= last; ++z) {
    if (BigRational(z) >= L) out.emplace_back(z, 1);
    stack.push_back({z, 1, z + 1, 1});
    while (!stack.empty()) {
      Node nd = std::move(stack.back());
      stack.pop_back();
      for (;;) {
        if (nd.b + nd.d > N) break;
        if (make_rational(nd.c, nd.d) <= L || make_rational(nd.a, nd.b) >= U) break;
        BigInt mp = nd.a + nd.c, mq = nd.b + nd.d;
        BigRational m = make_rational(mp, mq);
        if (m < L) {
          // largest t with (a + t c)/(b + t d) < L
          BigRational t_bound = (L * BigRational(nd.b) - BigRational(nd.a)) / (BigRational(nd.c) - L * BigRational(nd.d));
          BigInt t = ceil_of(t_bound) - 1;
          BigInt t_cap = (N - nd.b) / nd.d;
          if (t > t_cap) t = t_cap;
          nd.a += t * nd.c;
          nd.b += t * nd.d;
        } else if (m > U) {
          BigRational t_bound = (BigRational(nd.c) - U * BigRational(nd.d)) / (U * BigRational(nd.b) - BigRational(nd.a));
          BigInt t = ceil_of(t_bound) - 1;
          BigInt t_cap = (N - nd.d) / nd.b;
          if (t > t_cap) t = t_cap;
          nd.c += t * nd.a;
          nd.d += t * nd.b;
        } else {
          out.emplace_back(mp, mq);
          stack.push_back({mp, mq, nd.c, nd.d});
          nd.c = mp;
          nd.d = mq;
        }
      }
    }
  }
  return out;
}

}  // namespace

DangerSet danger_at_level(const Interval& I, std::size_t level, const StrategyConstants& k) {
  DangerSet out;
  out.level = level;
  out.M = k.M;
  std::tie(out.i_first, out.i_last) = k.level_range(level);
  if (out.i_last < out.i_first) return out;
  BigRational M(k.M);
  // Every strip at this level has half-width at most delta.
  BigRational delta = BigRational(1) / (M * M * BigRational(out.i_first * out.i_first));
  auto fracs = fractions_in(M * (I.lo - delta), M * (I.hi + delta), out.i_last);
  for (auto& [P, Q] : fracs) {
    DangerFamily f;
    f.P = P;
    f.Q = Q;
    f.center = make_rational(P, Q * k.M);
    f.k_lo = (out.i_first + Q - 1) / Q;
    f.k_hi = out.i_last / Q;
    BigRational dist = distance(f.center, I);
    if (dist > 0) f.k_hi = std::min(f.k_hi, reach_limit(dist, Q, k.M));
    if (f.k_lo <= f.k_hi) out.families.push_back(std::move(f));
  }
  std::sort(out.families.begin(), out.families.end(),
            [](const DangerFamily& a, const DangerFamily& b) { return a.center < b.center; });
  return out;
}

DangerSet enumerate_danger(const Interval& I, std::size_t s, const StrategyConstants& k) {
  return danger_at_level(I, s + 1, k);
}

std::vector<DangerStrip> expand(const DangerSet& set, std::size_t limit) {
  if (set.strip_count() > limit) throw InvalidInput("danger set too large to expand");
  std::vector<DangerStrip> out;
  for (const auto& f : set.families) {
    for (BigInt kk = f.k_lo; kk <= f.k_hi; ++kk) {
      BigInt n = f.Q * kk * set.M;
      BigRational w = make_rational(1, n * n);
      out.push_back({n, f.P * kk, f.center, {f.center - w, f.center + w}});
    }
  }
  return out;
}

std::vector<DangerStrip> danger_brute_force(const Interval& I, std::size_t level, const StrategyConstants& k) {
  std::vector<DangerStrip> out;
  auto [first, last] = k.level_range(level);
  for (BigInt i = first; i <= last; ++i) {
    BigInt n = i * k.M;
    BigRational inv_n = make_rational(1, n);
    BigInt p_lo = ceil_of(n * I.lo - inv_n);
    BigInt p_hi = floor_of(n * I.hi + inv_n);
    for (BigInt p = p_lo; p <= p_hi; ++p) {
      BigRational center = make_rational(p, n);
      BigRational w = make_rational(1, n * n);
      out.push_back({n, p, center, {center - w, center + w}});
    }
  }
  return out;
}

BigInt strips_meeting(const DangerFamily& family, const Interval& J, const StrategyConstants& k) {
  BigInt hi = family.k_hi;
  BigRational dist = distance(family.center, J);
  if (dist > 0) hi = std::min(hi, reach_limit(dist, family.Q, k.M));
  return hi < family.k_lo ? BigInt(0) : BigInt(hi - family.k_lo + 1);
}

// --- moves -------------------------------------------------------------------

std::string to_string(Violation v) {
  switch (v) {
    case Violation::none: return "ok";
    case Violation::wrong_length: return "wrong_length";
    case Violation::not_nested: return "not_nested";
    case Violation::not_closed: return "not_closed";
  }
  return "?";
}

Violation validate_move(const Transcript& t, const Interval& iv, Role role) {
  if (iv.lo > iv.hi) return Violation::not_closed;
  if (t.moves.empty()) {
    if (role != Role::B) return Violation::not_nested;
    return iv.length() == t.config.beta ? Violation::none : Violation::wrong_length;
  }
  const Move& last = t.moves.back();
  if (last.role == role) return Violation::not_nested;
  const BigRational& ratio = role == Role::A ? t.config.alpha : t.config.beta;
  if (iv.length() != ratio * last.iv.length()) return Violation::wrong_length;
  if (iv.lo < last.iv.lo || iv.hi > last.iv.hi) return Violation::not_nested;
  return Violation::none;
}

namespace {

Interval centered_half(const Interval& b) {
  BigRational q = b.length() / 4;
  return {b.lo + q, b.hi - q};
}

const Move& a_move(const Transcript& t, std::size_t n) {
  // Moves alternate B_0, A_0, B_1, A_1, ...
  const Move& m = t.moves.at(2 * n + 1);
  if (m.role != Role::A || m.n != n) throw InvalidInput("transcript moves out of order");
  return m;
}

std::set<BigRational> centers_of(const DangerSet& d) {
  std::set<BigRational> out;
  for (const auto& f : d.families) out.insert(f.center);
  return out;
}

bool interior(const BigRational& r, const Interval& iv) { return iv.lo < r && r < iv.hi; }

}  // namespace

Move strategy_a_move(const Transcript& t) {
  if (t.config.alpha != BigRational(1, 2)) throw InvalidInput("the strategy requires alpha = 1/2");
  if (t.moves.empty() || t.moves.back().role != Role::B) throw InvalidInput("strategy_a_move: not A's turn");
  const Move& bm = t.moves.back();
  const std::size_t n = bm.n;
  const auto& k = t.constants;
  Move out{Role::A, n, {}, MoveRationale{}};
  MoveRationale& why = *out.rationale;

  if (n % 2 == 1) {
    const std::size_t s = (n - 1) / 2;
    why.s = s;
    why.danger = enumerate_danger(a_move(t, 2 * s).iv, s, k);
    if (why.danger.empty()) {
      why.kind = "centered";
      out.iv = centered_half(bm.iv);
      return out;
    }
    auto centers = centers_of(why.danger);
    if (centers.size() != 1) {
      throw SoundnessError("danger strips at round " + std::to_string(n) + " have " + std::to_string(centers.size()) +
                           " distinct centers");
    }
    const BigRational& c = *centers.begin();
    why.kind = "avoid";
    why.center = c;
    BigRational mid = bm.iv.mid();
    if (c < mid) {
      why.half = "right";
      out.iv = {mid, bm.iv.hi};
    } else {
      why.half = "left";
      out.iv = {bm.iv.lo, mid};
    }
    if (interior(c, out.iv)) throw SoundnessError("chosen half still has the danger center inside");
    return out;
  }

  out.iv = centered_half(bm.iv);
  why.s = n / 2;
  why.kind = n == 0 ? "initial" : "quarter";
  // (C1) for this move, then disjointness from the strips avoided one move earlier.
  why.danger = danger_at_level(out.iv, n / 2, k);
  if (!why.danger.empty()) {
    throw SoundnessError("A_" + std::to_string(n) + " meets T_" + std::to_string(n / 2));
  }
  if (n >= 2) {
    const Move& prev = a_move(t, n - 1);
    if (prev.rationale) {
      for (const auto& f : prev.rationale->danger.families) {
        if (strips_meeting(f, out.iv, k) > 0) {
          throw SoundnessError("A_" + std::to_string(n) + " meets a strip centered at " + to_string(f.center));
        }
      }
    }
  }
  return out;
}

// --- adversaries -------------------------------------------------------------

namespace {

BigRational random_unit(std::mt19937_64& rng) {
  return make_rational(BigInt(static_cast<unsigned long>(rng() % (std::uint64_t{1} << 32))), BigInt(1) << 32);
}

Interval default_b0(const Transcript& t) {
  return t.config.b0 ? *t.config.b0 : Interval{0, t.config.beta};
}

BigRational b_length(const Transcript& t) { return t.config.beta * t.moves.back().iv.length(); }

Interval hostile_move(const Transcript& t) {
  const Interval& a = t.moves.back().iv;
  const std::size_t n = t.moves.back().n;
  const BigRational len = b_length(t);
  const auto& k = t.constants;
  std::vector<DangerFamily> families;
  for (std::size_t level = n / 2 + 1; level <= n / 2 + 2; ++level) {
    auto d = danger_at_level(a, level, k);
    families.insert(families.end(), d.families.begin(), d.families.end());
  }
  std::vector<BigRational> starts{a.lo, a.hi - len, a.lo + (a.length() - len) / 2};
  for (const auto& f : families) {
    BigInt n_max = f.Q * f.k_lo * k.M;
    BigRational w = make_rational(1, n_max * n_max);
    for (const BigRational& e : std::vector<BigRational>{f.center - w, f.center, f.center + w}) {
      starts.push_back(e);
      starts.push_back(e - len);
    }
    starts.push_back(f.center - len / 2);
  }
  Interval best;
  BigInt best_score = -1;
  for (BigRational lo : starts) {
    if (lo < a.lo) lo = a.lo;
    if (lo > a.hi - len) lo = a.hi - len;
    Interval cand{lo, lo + len};
    BigInt score = 0;
    for (const auto& f : families) score += strips_meeting(f, cand, k);
    if (score > best_score || (score == best_score && cand.lo < best.lo)) {
      best = cand;
      best_score = score;
    }
  }
  return best;
}

}  // namespace

const std::vector<std::string>& adversary_names() {
  static const std::vector<std::string> names{"random", "leftmost", "rightmost", "hostile"};
  return names;
}

Adversary make_adversary(const std::string& name) {
  if (name == "random") {
    return [](const Transcript& t, std::mt19937_64& rng) -> Interval {
      if (t.moves.empty()) {
        if (t.config.b0) return *t.config.b0;
        BigRational lo = random_unit(rng);
        return {lo, lo + t.config.beta};
      }
      const Interval& a = t.moves.back().iv;
      BigRational len = b_length(t);
      BigRational lo = a.lo + random_unit(rng) * (a.length() - len);
      return {lo, lo + len};
    };
  }
  if (name == "leftmost" || name == "rightmost") {
    bool left = name == "leftmost";
    return [left](const Transcript& t, std::mt19937_64&) -> Interval {
      if (t.moves.empty()) return default_b0(t);
      const Interval& a = t.moves.back().iv;
      BigRational len = b_length(t);
      return left ? Interval{a.lo, a.lo + len} : Interval{a.hi - len, a.hi};
    };
  }
  if (name == "hostile") {
    return [](const Transcript& t, std::mt19937_64&) -> Interval {
      if (t.moves.empty()) return default_b0(t);
      return hostile_move(t);
    };
  }
  throw ConfigError("unknown adversary '" + name + "'");
}

Transcript play(const GameConfig& config, const std::string& adversary, std::size_t rounds, std::uint64_t seed) {
  return play(config, make_adversary(adversary), adversary, rounds, seed);
}

Transcript play(const GameConfig& config, const Adversary& adversary, const std::string& name, std::size_t rounds,
                std::uint64_t seed) {
  if (rounds < 1) throw InvalidInput("rounds must be >= 1");
  if (config.alpha <= 0 || config.alpha >= 1) throw InvalidInput("alpha must lie in (0, 1)");
  if (config.alpha != BigRational(1, 2)) throw InvalidInput("the strategy requires alpha = 1/2");
  Transcript t;
  t.config = config;
  t.constants = derive_constants(config.beta, config.D, config.threshold);
  t.adversary = name;
  t.seed = seed;
  t.rounds = rounds;
  std::mt19937_64 rng(seed);

  auto b_turn = [&](std::size_t n) {
    Interval iv = adversary(t, rng);
    Violation v = validate_move(t, iv, Role::B);
    if (v != Violation::none) {
      t.forfeit = "B_" + std::to_string(n) + " " + to_string(v) + ": [" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]";
      return false;
    }
    t.moves.push_back({Role::B, n, iv, std::nullopt});
    return true;
  };

  if (!b_turn(0)) return t;
  for (std::size_t n = 0; n < rounds; ++n) {
    Move a = strategy_a_move(t);
    if (validate_move(t, a.iv, Role::A) != Violation::none) throw SoundnessError("strategy produced an invalid move");
    t.moves.push_back(std::move(a));
    if (n + 1 < rounds && !b_turn(n + 1)) break;
  }
  return t;
}

// --- verification ------------------------------------------------------------

TranscriptReport verify_transcript(const Transcript& t) {
  TranscriptReport r;
  auto problem = [&](std::string what) { r.problems.push_back(std::move(what)); };
  StrategyConstants k;
  try {
    k = derive_constants(t.config.beta, t.config.D, t.config.threshold);
  } catch (const Error& e) {
    r.geometry_ok = false;
    problem(std::string("constants: ") + e.what());
    return r;
  }
  if (k.M != t.constants.M || k.R != t.constants.R || k.N != t.constants.N) {
    r.geometry_ok = false;
    problem("recorded constants differ from the recomputed ones");
  }
  if (t.forfeit) problem("B forfeited: " + *t.forfeit);

  // Replay the moves through validate_move on a fresh transcript.
  Transcript replay;
  replay.config = t.config;
  replay.constants = k;
  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    const Move& m = t.moves[i];
    Role expect = i % 2 == 0 ? Role::B : Role::A;
    if (m.role != expect || m.n != i / 2) {
      r.geometry_ok = false;
      problem("move " + std::to_string(i) + " out of order");
      return r;
    }
    Violation v = validate_move(replay, m.iv, m.role);
    if (v != Violation::none) {
      r.geometry_ok = false;
      problem(std::string(m.role == Role::A ? "A_" : "B_") + std::to_string(m.n) + ": " + to_string(v));
    }
    replay.moves.push_back({m.role, m.n, m.iv, std::nullopt});
  }

  std::vector<const Interval*> a_moves;
  for (const auto& m : t.moves) {
    if (m.role == Role::A) a_moves.push_back(&m.iv);
  }
  std::vector<DangerSet> e_sets(a_moves.size());
  for (std::size_t n = 0; n < a_moves.size(); ++n) {
    const Interval& a = *a_moves[n];
    if (n % 2 == 0) {
      const std::size_t s = n / 2;
      ++r.c1_checks;
      auto [first, last] = k.level_range(s);
      if (last < first) ++r.c1_vacuous;
      if (!danger_at_level(a, s, k).empty()) {
        ++r.c1_failures;
        problem("(C1) fails at A_" + std::to_string(n));
      }
      if (n >= 2) {
        for (const auto& f : e_sets[n - 1].families) {
          if (strips_meeting(f, a, k) > 0) {
            ++r.even_failures;
            problem("A_" + std::to_string(n) + " meets a strip centered at " + to_string(f.center));
            break;
          }
        }
      }
    } else {
      const std::size_t s = (n - 1) / 2;
      e_sets[n] = enumerate_danger(*a_moves[2 * s], s, k);
      if (e_sets[n].empty()) continue;
      ++r.claim1_checks;
      auto centers = centers_of(e_sets[n]);
      if (centers.size() > 1) {
        ++r.claim1_violations;
        problem("E_" + std::to_string(s + 1) + " has " + std::to_string(centers.size()) + " centers");
      }
      for (const auto& c : centers) {
        if (interior(c, a)) {
          ++r.odd_failures;
          problem("A_" + std::to_string(n) + " has the danger center " + to_string(c) + " inside");
          break;
        }
      }
    }
  }
  return r;
}

PostCheck post_check(const Transcript& t, const BigInt& q_bound) {
  PostCheck out;
  const Move* last_a = nullptr;
  for (const auto& m : t.moves) {
    if (m.role == Role::A) last_a = &m;
  }
  if (last_a == nullptr) throw InvalidInput("post_check: no A move in the transcript");
  const auto& k = t.constants;
  out.x_hat = last_a->iv.mid();
  out.s_max = last_a->n / 2;
  // No index i >= 1 below V_{s_max+1}: nothing is certified.
  out.q_limit = k.V(out.s_max + 1) <= 1 ? BigInt(0) : ceil_of(BigRational(k.M) * k.V(out.s_max + 1));
  out.min_norm = 1;

  auto digits = cf_of_rational(out.x_hat);
  BigInt q_prev = 0, q = 1;
  for (std::size_t i = 1; i < digits.size(); ++i) {
    BigInt next = digits[i] * q + q_prev;
    q_prev = q;
    q = next;
    if (q >= out.q_limit || q > q_bound) break;
    ++out.checked;
    if (q % k.M == 0) ++out.divisible;
    BigRational norm = d_norm(t.config.D, q);
    if (norm < out.min_norm) out.min_norm = norm;
  }
  out.norm_ok = out.min_norm >= make_rational(1, k.M);
  return out;
}

// --- JSON --------------------------------------------------------------------

namespace {

json interval_json(const Interval& iv) { return json{{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}}; }

Interval interval_from(const json& j) { return {parse_rational(j.at("lo").get<std::string>()), parse_rational(j.at("hi").get<std::string>())}; }

DangerSet danger_from_json(const json& j, const BigInt& M) {
  DangerSet d;
  d.level = j.at("level").get<std::size_t>();
  d.M = M;
  d.i_first = parse_integer(j.at("i_first").get<std::string>());
  d.i_last = parse_integer(j.at("i_last").get<std::string>());
  for (const auto& f : j.at("families")) {
    DangerFamily fam;
    fam.center = parse_rational(f.at("center").get<std::string>());
    fam.P = parse_integer(f.at("P").get<std::string>());
    fam.Q = parse_integer(f.at("Q").get<std::string>());
    fam.k_lo = parse_integer(f.at("k_lo").get<std::string>());
    fam.k_hi = parse_integer(f.at("k_hi").get<std::string>());
    d.families.push_back(std::move(fam));
  }
  return d;
}

}  // namespace

json to_json(const DangerSet& d) {
  json fams = json::array();
  for (const auto& f : d.families) {
    fams.push_back({{"center", to_string(f.center)},
                    {"P", to_string(f.P)},
                    {"Q", to_string(f.Q)},
                    {"k_lo", to_string(f.k_lo)},
                    {"k_hi", to_string(f.k_hi)}});
  }
  return json{{"level", d.level}, {"i_first", to_string(d.i_first)}, {"i_last", to_string(d.i_last)}, {"families", fams}};
}

json to_json(const Transcript& t) {
  json config{{"alpha", to_string(t.config.alpha)},
              {"beta", to_string(t.config.beta)},
              {"B0", t.config.b0 ? interval_json(*t.config.b0) : json(nullptr)},
              {"D", t.config.D.text()},
              {"threshold", t.config.threshold ? json(to_string(*t.config.threshold)) : json(nullptr)}};
  const auto& k = t.constants;
  json constants{{"R", to_string(k.R)},
                 {"threshold", to_string(k.threshold)},
                 {"N", k.N},
                 {"M", to_string(k.M)},
                 {"V0", to_string(k.V(0))}};
  json moves = json::array();
  for (const auto& m : t.moves) {
    json jm{{"role", m.role == Role::A ? "A" : "B"}, {"n", m.n}, {"lo", to_string(m.iv.lo)}, {"hi", to_string(m.iv.hi)}};
    if (m.rationale) {
      const auto& w = *m.rationale;
      json jr{{"kind", w.kind}, {"s", w.s}};
      if (w.center) jr["center"] = to_string(*w.center);
      if (!w.half.empty()) jr["half"] = w.half;
      jr["danger"] = to_json(w.danger);
      jm["rationale"] = jr;
    } else {
      jm["rationale"] = nullptr;
    }
    moves.push_back(jm);
  }
  return json{{"kind", "game_transcript"},
              {"config", config},
              {"constants", constants},
              {"adversary", t.adversary},
              {"seed", t.seed},
              {"rounds", t.rounds},
              {"moves", moves},
              {"forfeit", t.forfeit ? json(*t.forfeit) : json(nullptr)}};
}

Transcript transcript_from_json(const json& j) {
  Transcript t;
  try {
    const auto& c = j.at("config");
    t.config.alpha = parse_rational(c.at("alpha").get<std::string>());
    t.config.beta = parse_rational(c.at("beta").get<std::string>());
    if (!c.at("B0").is_null()) t.config.b0 = interval_from(c.at("B0"));
    t.config.D = DSequence::parse(c.at("D").get<std::string>());
    if (!c.at("threshold").is_null()) t.config.threshold = parse_rational(c.at("threshold").get<std::string>());
    t.constants = derive_constants(t.config.beta, t.config.D, t.config.threshold);
    const auto& k = j.at("constants");
    if (parse_integer(k.at("M").get<std::string>()) != t.constants.M ||
        parse_rational(k.at("R").get<std::string>()) != t.constants.R) {
      throw VerificationFailure("transcript constants do not match the configuration");
    }
    t.adversary = j.at("adversary").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.rounds = j.at("rounds").get<std::size_t>();
    for (const auto& jm : j.at("moves")) {
      Move m{jm.at("role").get<std::string>() == "A" ? Role::A : Role::B, jm.at("n").get<std::size_t>(),
             {parse_rational(jm.at("lo").get<std::string>()), parse_rational(jm.at("hi").get<std::string>())},
             std::nullopt};
      if (!jm.at("rationale").is_null()) {
        const auto& jr = jm.at("rationale");
        MoveRationale w;
        w.kind = jr.at("kind").get<std::string>();
        w.s = jr.at("s").get<std::size_t>();
        if (jr.contains("center")) w.center = parse_rational(jr.at("center").get<std::string>());
        if (jr.contains("half")) w.half = jr.at("half").get<std::string>();
        w.danger = danger_from_json(jr.at("danger"), t.constants.M);
        m.rationale = std::move(w);
      }
      t.moves.push_back(std::move(m));
    }
    if (!j.at("forfeit").is_null()) t.forfeit = j.at("forfeit").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw VerificationFailure(std::string("malformed transcript: ") + e.what());
  }
  return t;
}

json to_json(const TranscriptReport& r) {
  return json{{"ok", r.ok()},
              {"geometry_ok", r.geometry_ok},
              {"c1_checks", r.c1_checks},
              {"c1_vacuous", r.c1_vacuous},
              {"c1_failures", r.c1_failures},
              {"claim1_checks", r.claim1_checks},
              {"claim1_violations", r.claim1_violations},
              {"odd_failures", r.odd_failures},
              {"even_failures", r.even_failures},
              {"problems", r.problems}};
}

json to_json(const PostCheck& p) {
  return json{{"x_hat", to_string(p.x_hat)},
              {"s_max", p.s_max},
              {"q_limit", to_string(p.q_limit)},
              {"checked", p.checked},
              {"divisible_by_M", p.divisible},
              {"min_norm", to_string(p.min_norm)},
              {"norm_ok", p.norm_ok}};
}

}  // namespace dioph
