#include "dioph/certificates.hpp"

#include <map>

#include "dioph/certified_log.hpp"
#include "dioph/errors.hpp"
#include "dioph/parallel.hpp"

namespace dioph {

namespace {

json enclosure_json(const RationalEnclosure& e) { return json{{"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}}; }

RationalEnclosure enclosure_from(const json& j) {
  return {parse_rational(j.at("lo").get<std::string>()), parse_rational(j.at("hi").get<std::string>())};
}

std::string str(const json& j, const char* key) { return j.at(key).get<std::string>(); }

json integers(const std::vector<BigInt>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

}  // namespace

json to_json(const ConstructionParams& p) {
  return json{{"x", p.x.text()},
              {"lambda", to_string(p.lambda)},
              {"M", p.M},
              {"c", to_string(p.c)},
              {"sqrt_c", to_string(p.sqrt_c)},
              {"mode", to_string(p.mode)},
              {"depth", p.depth},
              {"enumeration", to_string(p.enumeration)},
              {"seed", p.seed},
              {"width", p.width}};
}

ConstructionParams params_from_json(const json& j) {
  auto x = RealDescriptor::parse(str(j, "x"));
  auto p = make_params(x, parse_rational(str(j, "lambda")), parse_mode(str(j, "mode")), j.at("depth").get<std::size_t>(),
                       parse_enumeration(str(j, "enumeration")), j.at("seed").get<std::uint64_t>(),
                       j.at("width").get<std::size_t>(), j.at("M").get<std::int64_t>());
  if (to_string(p.c) != str(j, "c")) throw VerificationFailure("recorded c differs from the recomputed choice");
  return p;
}

json to_json(const ConditionReport& r) {
  json conds = json::array();
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    conds.push_back({{"condition", i + 1}, {"ok", r.conditions[i].ok}, {"witness", r.conditions[i].witness}});
  }
  return json{{"k", r.k},
              {"all_pass", r.all_pass()},
              {"conditions", conds},
              {"window_size", r.window_size},
              {"claim3", r.claim3},
              {"min_count", r.min_count}};
}

json to_json(const ParentReport& r) {
  json hits = json::array();
  for (const auto& h : r.strip_hits) hits.push_back({{"s", h.s}, {"p", to_string(h.p)}, {"q", to_string(h.q)}});
  return json{{"parent", r.parent},
              {"A", {{"count", r.a_count}, {"s_first", r.a_first}, {"s_last", r.a_last}}},
              {"B", {{"count", r.b_count}, {"not_nice", r.not_nice}, {"redundant", r.redundant}}},
              {"C", {{"count", r.c_count}, {"thinned", r.thinned}}},
              {"E", {{"count", r.e_count}, {"strip_hits", hits}}},
              {"max_strips_touching_parent", r.max_strips_touching_parent},
              {"max_children_per_strip", r.max_children_per_strip}};
}

json to_json(const DimensionReport& d) {
  json samples = json::array();
  for (const auto& s : d.falconer.samples) {
    samples.push_back({{"k", s.k}, {"m", to_string(s.m)}, {"value", enclosure_json(s.value)}, {"approx", approx(s.value)}});
  }
  return json{{"M", d.M},
              {"closed_form", enclosure_json(d.closed_form.value)},
              {"closed_form_exact", d.closed_form.exact},
              {"falconer",
               {{"m_k", "M/32"},
                {"eps_k", "M^-(2k+3)"},
                {"K", d.falconer.K},
                {"stride", d.falconer.stride},
                {"at_K", enclosure_json(d.falconer.at_K)},
                {"at_K_approx", approx(d.falconer.at_K)},
                {"tail_start", d.falconer.tail_start},
                {"tail_min", enclosure_json(d.falconer.tail_min)},
                {"samples", samples}}},
              {"corollary1",
               {{"fiber", enclosure_json(d.corollary.fiber)},
                {"dim_bad_cited", to_string(d.corollary.dim_bad)},
                {"total", enclosure_json(d.corollary.total)},
                {"limit", to_string(d.corollary.limit)}}}};
}

json to_json(const Lemma1Report& r) {
  json first = nullptr;
  if (r.first_counterexample) first = {r.first_counterexample->first, r.first_counterexample->second};
  return json{{"A_max", r.a_max},
              {"B_max", r.b_max},
              {"pairs_checked", r.pairs_checked},
              {"counterexamples", r.counterexamples},
              {"case_counts", r.case_counts},
              {"index_counts", r.index_counts},
              {"first_counterexample", first}};
}

// --- construction ------------------------------------------------------------

json construction_certificate(const Construction& c, const std::optional<DimensionReport>& dim) {
  json levels = json::array();
  for (const auto& level : c.levels) {
    json ivs = json::array();
    for (const auto& li : level.intervals) ivs.push_back({li.parent, li.interval().digits.back()});
    json reports = json::array();
    for (const auto& r : level.reports) reports.push_back(to_json(r));
    levels.push_back({{"k", level.k},
                      {"eps", to_string(level.eps)},
                      {"window", {{"lo", to_string(level.window_lo)}, {"hi", to_string(level.window_hi)}}},
                      {"avoided", integers(level.avoided)},
                      {"expanded_parents", level.expanded_parents},
                      {"count", level.intervals.size()},
                      {"intervals", ivs},
                      {"drops", reports}});
  }
  json conds = json::array();
  for (const auto& r : c.reports) conds.push_back(to_json(r));
  json out{{"kind", "construction"}, {"params", to_json(c.params)}, {"levels", levels}, {"conditions", conds}};
  out["dimension"] = dim ? to_json(*dim) : json(nullptr);
  return out;
}

std::vector<LevelSet> levels_from_certificate(const json& j, const ConstructionParams& p) {
  std::vector<LevelSet> out;
  for (const auto& jl : j.at("levels")) {
    LevelSet level;
    level.k = jl.at("k").get<std::size_t>();
    if (level.k != out.size() + 1) throw VerificationFailure("levels out of order");
    level.eps = parse_rational(str(jl, "eps"));
    std::tie(level.window_lo, level.window_hi) = window(p, level.k);
    level.avoided = window_denominators(p, level.k - 1);
    level.expanded_parents = jl.at("expanded_parents").get<std::vector<std::size_t>>();
    const auto& ivs = jl.at("intervals");
    level.intervals.resize(ivs.size());
    const LevelSet* prev = out.empty() ? nullptr : &out.back();
    parallel_for(ivs.size(), [&](std::size_t i) {
      auto parent = ivs[i].at(0).get<std::size_t>();
      auto s = ivs[i].at(1).get<std::int64_t>();
      if (s < 1) throw VerificationFailure("digit < 1 in the certificate");
      if (prev == nullptr) {
        std::vector<std::int64_t> d{s};
        level.intervals[i] = {is_nice(interval_of(d), p.x, p.c), parent};
      } else {
        if (parent >= prev->intervals.size()) throw VerificationFailure("parent index out of range");
        const auto& pc = prev->intervals[parent].cert;
        level.intervals[i] = {extend_niceness(pc, child_of(pc.interval, s), p.x), parent};
      }
    });
    out.push_back(std::move(level));
  }
  return out;
}

// --- points ------------------------------------------------------------------

json point_certificate(const ConstructionParams& p, std::size_t depth, std::uint64_t seed, const PointCertificate& cert) {
  json reports = json::array();
  for (const auto& r : cert.level_reports) reports.push_back(to_json(r));
  json products = json::array();
  for (const auto& b : cert.products) {
    products.push_back({{"source", b.source},
                        {"n", b.n},
                        {"q", to_string(b.q)},
                        {"dist_x", enclosure_json(b.dist_x)},
                        {"dist_y", enclosure_json(b.dist_y)},
                        {"product", enclosure_json(b.product)},
                        {"product_lo_approx", approx(b.product.lo)}});
  }
  return json{{"kind", "point"},
              {"params", to_json(p)},
              {"depth", depth},
              {"seed", seed},
              {"c", to_string(cert.c)},
              {"M", cert.M},
              {"y_interval", to_json(cert.y_interval)},
              {"region", {{"lo", to_string(cert.region_lo)}, {"hi", to_string(cert.region_hi)}}},
              {"level_reports", reports},
              {"products", products},
              {"c_x", to_string(cert.c_x)},
              {"c_y", to_string(cert.c_y)},
              {"floor", to_string(cert.floor)},
              {"floor_approx", approx(cert.floor)}};
}

PointCertificate point_from_json(const json& j) {
  PointCertificate cert;
  cert.c = parse_rational(str(j, "c"));
  cert.M = j.at("M").get<std::int64_t>();
  cert.y_interval = interval_from_json(j.at("y_interval"));
  cert.region_lo = parse_rational(str(j.at("region"), "lo"));
  cert.region_hi = parse_rational(str(j.at("region"), "hi"));
  for (const auto& b : j.at("products")) {
    cert.products.push_back({str(b, "source"), b.at("n").get<std::size_t>(), parse_integer(str(b, "q")),
                             enclosure_from(b.at("dist_x")), enclosure_from(b.at("dist_y")),
                             enclosure_from(b.at("product"))});
  }
  cert.c_x = parse_rational(str(j, "c_x"));
  cert.c_y = parse_rational(str(j, "c_y"));
  cert.floor = parse_rational(str(j, "floor"));
  return cert;
}

// --- games -------------------------------------------------------------------

json game_batch(const std::vector<Transcript>& games, const BigInt& q_bound) {
  std::vector<json> entries(games.size());
  parallel_for(games.size(), [&](std::size_t i) {
    json t = to_json(games[i]);
    t["verification"] = to_json(verify_transcript(games[i]));
    t["post_check"] = to_json(post_check(games[i], q_bound));
    entries[i] = std::move(t);
  });
  json arr = json::array();
  for (auto& e : entries) arr.push_back(std::move(e));
  return json{{"kind", "game_batch"}, {"q_bound", to_string(q_bound)}, {"games", arr}};
}

// --- verification ------------------------------------------------------------

namespace {

void verify_construction(const json& j, VerifyResult& r) {
  auto p = params_from_json(j.at("params"));
  auto levels = levels_from_certificate(j, p);
  const auto& recorded = j.at("conditions");
  if (recorded.size() != levels.size()) r.problems.push_back("condition report count differs from level count");
  json summary = json::array();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    auto rep = verify_level(levels[i], p, i == 0 ? nullptr : &levels[i - 1]);
    if (!rep.all_pass()) {
      r.problems.push_back("level " + std::to_string(i + 1) + " fails its conditions");
      for (const auto& c : rep.conditions) {
        if (!c.ok) r.problems.push_back("  " + c.witness);
      }
    }
    if (i < recorded.size() && to_json(rep) != recorded[i]) {
      r.problems.push_back("level " + std::to_string(i + 1) + " condition report differs from the recorded one");
    }
    const auto& jl = j.at("levels")[i];
    if (levels[i].eps != level_gap(p, levels[i].k)) r.problems.push_back("recorded eps differs at level " + std::to_string(i + 1));
    if (jl.at("avoided") != integers(levels[i].avoided)) {
      r.problems.push_back("recorded window denominators differ at level " + std::to_string(i + 1));
    }
    std::map<std::size_t, std::size_t> per_parent;
    for (const auto& li : levels[i].intervals) ++per_parent[li.parent];
    for (const auto& d : jl.at("drops")) {
      auto parent = d.at("parent").get<std::size_t>();
      if (d.at("E").at("count").get<std::size_t>() != per_parent[parent]) {
        r.problems.push_back("drop log count mismatch for parent " + std::to_string(parent));
      }
    }
    summary.push_back({{"k", i + 1}, {"count", levels[i].intervals.size()}, {"all_pass", rep.all_pass()}, {"min_count", rep.min_count}});
  }
  if (!j.at("dimension").is_null()) {
    const auto& d = j.at("dimension");
    auto fresh = dimension_report(d.at("M").get<std::int64_t>(), d.at("falconer").at("K").get<std::size_t>());
    if (enclosure_json(fresh.closed_form.value) != d.at("closed_form") ||
        enclosure_json(fresh.falconer.at_K) != d.at("falconer").at("at_K")) {
      r.problems.push_back("dimension block differs from recomputation");
    }
  }
  r.details = {{"levels", summary}};
}

void verify_point(const json& j, VerifyResult& r) {
  auto p = params_from_json(j.at("params"));
  auto cert = point_from_json(j);
  auto depth = j.at("depth").get<std::size_t>();
  auto seed = j.at("seed").get<std::uint64_t>();
  if (cert.c != p.c || cert.M != p.M) r.problems.push_back("point constants differ from params");
  if (!point_certificate_holds(cert, p.x)) r.problems.push_back("product bounds do not hold");
  auto fresh = sample_point(p, depth, seed);
  if (fresh.y_interval.digits != cert.y_interval.digits) r.problems.push_back("sampled path differs on replay");
  if (point_certificate(p, depth, seed, fresh) != j) r.problems.push_back("certificate differs from the replayed one");
  for (const auto& rep : fresh.level_reports) {
    if (!rep.all_pass()) r.problems.push_back("level " + std::to_string(rep.k) + " of the path fails its conditions");
  }
  r.details = {{"digits", cert.y_interval.digits}, {"products", cert.products.size()}, {"floor", to_string(cert.floor)}};
}

void verify_game(const json& j, VerifyResult& r, const BigInt& q_bound) {
  auto t = transcript_from_json(j);
  auto rep = verify_transcript(t);
  auto pc = post_check(t, q_bound);
  if (!rep.ok()) {
    for (const auto& p : rep.problems) r.problems.push_back(p);
    if (rep.problems.empty()) r.problems.push_back("transcript fails verification");
  }
  if (pc.divisible != 0) r.problems.push_back("a convergent denominator of the midpoint is divisible by M");
  r.details = {{"verification", to_json(rep)}, {"post_check", to_json(pc)}};
}

}  // namespace

VerifyResult verify_certificate(const json& j) {
  VerifyResult r;
  try {
    r.kind = j.at("kind").get<std::string>();
    if (r.kind == "construction") {
      verify_construction(j, r);
    } else if (r.kind == "point") {
      verify_point(j, r);
    } else if (r.kind == "game_transcript") {
      verify_game(j, r, BigInt(1) << 256);
    } else if (r.kind == "game_batch") {
      BigInt q_bound = parse_integer(str(j, "q_bound"));
      json per = json::array();
      std::size_t passed = 0;
      for (const auto& g : j.at("games")) {
        VerifyResult one;
        verify_game(g, one, q_bound);
        if (one.problems.empty()) ++passed;
        for (auto& p : one.problems) r.problems.push_back(std::move(p));
      }
      r.details = {{"games", j.at("games").size()}, {"passed", passed}};
    } else if (r.kind == "dimension") {
      auto fresh = dimension_report(j.at("report").at("M").get<std::int64_t>(),
                                    j.at("report").at("falconer").at("K").get<std::size_t>(),
                                    j.at("report").at("falconer").at("stride").get<std::size_t>());
      if (to_json(fresh) != j.at("report")) r.problems.push_back("dimension report differs from recomputation");
    } else if (r.kind == "lemma1") {
      auto x = RealDescriptor::parse(str(j, "x"));
      auto fresh = lemma1_brute_check(x, parse_rational(str(j, "c")), j.at("report").at("A_max").get<std::int64_t>(),
                                      j.at("report").at("B_max").get<std::int64_t>());
      if (to_json(fresh) != j.at("report")) r.problems.push_back("Lemma 1 report differs from recomputation");
      if (fresh.counterexamples != 0) r.problems.push_back("Lemma 1 has counterexamples");
    } else {
      throw VerificationFailure("unknown certificate kind '" + r.kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw VerificationFailure(std::string("malformed certificate: ") + e.what());
  }
  r.ok = r.problems.empty();
  return r;
}

std::string dump_certificate(const json& j) { return j.dump() + "\n"; }

}  // namespace dioph
