#include "dioph/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "dioph/certificates.hpp"
#include "dioph/certified_log.hpp"
#include "dioph/errors.hpp"
#include "dioph/mixed_norm.hpp"
#include "dioph/parallel.hpp"

namespace dioph {

namespace fs = std::filesystem;

// --- config ------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.emplace_back(trim(cur));
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

enum class ValueType { text, rational, integer, count, seeds, descriptor, dseq, mode, enumeration, adversaries, boolean,
                       integer_list };

const std::map<std::string, std::map<std::string, ValueType>>& schema() {
  using V = ValueType;
  static const std::map<std::string, std::map<std::string, ValueType>> s{
      {"run", {{"threads", V::count}}},
      {"construct",
       {{"name", V::text}, {"x", V::descriptor}, {"lambda", V::rational}, {"mode", V::mode}, {"M", V::integer},
        {"depth", V::count}, {"enumerate", V::enumeration}, {"seed", V::count}, {"width", V::count},
        {"dimension_K", V::count}}},
      {"point",
       {{"name", V::text}, {"x", V::descriptor}, {"lambda", V::rational}, {"mode", V::mode}, {"M", V::integer},
        {"depth", V::count}, {"seeds", V::seeds}}},
      {"game",
       {{"name", V::text}, {"alpha", V::rational}, {"beta", V::rational}, {"D", V::dseq}, {"adversaries", V::adversaries},
        {"rounds", V::count}, {"seeds", V::seeds}, {"threshold", V::rational}, {"q_bound", V::integer},
        {"save_transcripts", V::boolean}}},
      {"mixed", {{"name", V::text}, {"D", V::dseq}, {"x", V::descriptor}, {"qmax", V::count}, {"eps", V::rational}}},
      {"dimension", {{"name", V::text}, {"M", V::integer_list}, {"K", V::count}, {"stride", V::count}}},
      {"lemma1",
       {{"name", V::text}, {"x", V::descriptor}, {"c", V::rational}, {"A_max", V::count}, {"B_max", V::count}}},
  };
  return s;
}

const std::map<std::string, std::vector<std::string>>& required_keys() {
  static const std::map<std::string, std::vector<std::string>> r{
      {"run", {}},          {"construct", {"x", "mode", "depth"}}, {"point", {"x", "mode", "depth", "seeds"}},
      {"game", {"beta"}},   {"mixed", {"D", "x", "qmax"}},        {"dimension", {"M"}},
      {"lemma1", {"x", "c", "A_max", "B_max"}},
  };
  return r;
}

// Parses one value, returning its canonical text.
std::string canonical(ValueType type, const std::string& v) {
  switch (type) {
    case ValueType::text: return v;
    case ValueType::rational: return to_string(parse_rational(v));
    case ValueType::integer: return to_string(parse_integer(v));
    case ValueType::count: {
      BigInt z = parse_integer(v);
      if (z < 0) throw InvalidInput("must be >= 0");
      return to_string(z);
    }
    case ValueType::seeds: {
      auto s = parse_seed_range(v);
      (void)s;
      return std::string(trim(v));
    }
    case ValueType::descriptor: return RealDescriptor::parse(v).text();
    case ValueType::dseq: return DSequence::parse(v).text();
    case ValueType::mode: return to_string(parse_mode(v));
    case ValueType::enumeration: return to_string(parse_enumeration(v));
    case ValueType::adversaries: {
      std::string out;
      for (const auto& a : split_list(v)) {
        make_adversary(a);
        out += (out.empty() ? "" : ",") + a;
      }
      if (out.empty()) throw InvalidInput("empty adversary list");
      return out;
    }
    case ValueType::boolean:
      if (v == "true" || v == "false") return v;
      throw InvalidInput("expected true or false");
    case ValueType::integer_list: {
      std::string out;
      for (const auto& a : split_list(v)) out += (out.empty() ? "" : ",") + to_string(parse_integer(a));
      if (out.empty()) throw InvalidInput("empty list");
      return out;
    }
  }
  return v;
}

}  // namespace

const ConfigEntry* ConfigSection::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

std::string ConfigSection::get(std::string_view key, const std::string& fallback) const {
  const auto* e = find(key);
  return e ? e->value : fallback;
}

std::string ConfigSection::require(std::string_view key) const {
  const auto* e = find(key);
  if (!e) throw ConfigError("line " + std::to_string(line) + ": [" + kind + "] needs '" + std::string(key) + "'");
  return e->value;
}

std::string ConfigSection::name(std::size_t index) const {
  const auto* e = find("name");
  return e ? e->value : kind + std::to_string(index);
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& s : sections) {
    if (!out.empty()) out += "\n";
    out += "[" + s.kind + "]\n";
    for (const auto& e : s.entries) out += e.key + " = " + e.value + "\n";
  }
  return out;
}

std::string ExperimentConfig::hash() const {
  std::string text = to_text();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      std::string kind(trim(line.substr(1, line.size() - 2)));
      if (!schema().count(kind)) throw ConfigError(where + ": unknown section [" + kind + "]");
      cfg.sections.push_back({kind, line_no, {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    if (cfg.sections.empty()) throw ConfigError(where + ": entry before any [section]");
    auto& sec = cfg.sections.back();
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    const auto& keys = schema().at(sec.kind);
    auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(where + ": unknown field '" + key + "' in [" + sec.kind + "]");
    if (sec.find(key)) throw ConfigError(where + ": duplicate field '" + key + "'");
    try {
      value = canonical(it->second, value);
    } catch (const Error& e) {
      throw ConfigError(where + ", field '" + key + "': " + e.what());
    }
    sec.entries.push_back({key, value, line_no});
  }
  if (cfg.sections.empty()) throw ConfigError("config is empty");
  std::set<std::string> names;
  for (std::size_t i = 0; i < cfg.sections.size(); ++i) {
    const auto& sec = cfg.sections[i];
    for (const auto& k : required_keys().at(sec.kind)) sec.require(k);
    if (sec.kind != "run" && !names.insert(sec.name(i)).second) {
      throw ConfigError("line " + std::to_string(sec.line) + ": duplicate task name '" + sec.name(i) + "'");
    }
  }
  return cfg;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig load_config(const fs::path& path) { return parse_config(read_file(path)); }

std::vector<std::uint64_t> parse_seed_range(std::string_view text) {
  std::vector<std::uint64_t> out;
  auto t = trim(text);
  auto to_u64 = [](std::string_view s) {
    BigInt z = parse_integer(trim(s));
    if (z < 0 || !z.fits_ulong_p()) throw InvalidInput("seed out of range");
    return static_cast<std::uint64_t>(z.get_ui());
  };
  if (auto dots = t.find(".."); dots != std::string_view::npos) {
    auto a = to_u64(t.substr(0, dots));
    auto b = to_u64(t.substr(dots + 2));
    if (b < a) throw InvalidInput("empty seed range");
    for (auto s = a; s <= b; ++s) out.push_back(s);
    return out;
  }
  for (const auto& part : split_list(t)) out.push_back(to_u64(part));
  if (out.empty()) throw InvalidInput("no seeds");
  return out;
}

// --- files -------------------------------------------------------------------

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string(), 1);
    out << content;
    if (!out) throw Error("write failed for " + tmp.string(), 1);
  }
  fs::rename(tmp, path);
}

// --- manifest ----------------------------------------------------------------

int RunManifest::exit_code() const {
  for (const auto& t : tasks) {
    if (t.exit_code != 0) return t.exit_code;
  }
  return 0;
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  json tasks = json::array();
  for (const auto& t : m.tasks) {
    tasks.push_back({{"name", t.name},
                     {"kind", t.kind},
                     {"status", t.status},
                     {"exit_code", t.exit_code},
                     {"error", t.error},
                     {"artifacts", t.artifacts},
                     {"summary", t.summary}});
  }
  return json{{"tool", m.tool},
              {"version", m.version},
              {"config_hash", m.config_hash},
              {"started", m.started},
              {"finished", m.finished},
              {"threads", m.threads},
              {"tasks", tasks}};
}

RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  RunManifest m;
  try {
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.started = j.at("started").get<std::string>();
    m.finished = j.at("finished").get<std::string>();
    m.threads = j.at("threads").get<std::size_t>();
    for (const auto& t : j.at("tasks")) {
      m.tasks.push_back({t.at("name").get<std::string>(), t.at("kind").get<std::string>(),
                         t.at("status").get<std::string>(), t.at("exit_code").get<int>(),
                         t.at("error").get<std::string>(), t.at("artifacts").get<std::vector<std::string>>(),
                         t.at("summary")});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

// --- tasks -------------------------------------------------------------------

namespace {

struct TaskOutput {
  std::vector<std::pair<std::string, std::string>> files;  // relative path, content
  json summary;
};

std::string now_utc() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::size_t count_of(const ConfigSection& s, const char* key, std::size_t fallback) {
  const auto* e = s.find(key);
  return e ? static_cast<std::size_t>(parse_integer(e->value).get_ui()) : fallback;
}

std::optional<std::int64_t> optional_int(const ConfigSection& s, const char* key) {
  const auto* e = s.find(key);
  if (!e) return std::nullopt;
  BigInt z = parse_integer(e->value);
  if (!z.fits_slong_p()) throw ConfigError("line " + std::to_string(e->line) + ", field '" + key + "': too large");
  return z.get_si();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

std::string levels_csv(const Construction& con) {
  // Observed per-parent counts drive a finite Falconer curve over the built levels.
  std::vector<BigInt> m_obs;
  for (const auto& r : con.reports) m_obs.push_back(BigInt(static_cast<unsigned long>(r.min_count)));
  std::optional<FalconerReport> fal;
  if (con.levels.size() >= 2) {
    fal = falconer_bound([&](std::size_t k) { return m_obs.at(k - 1); },
                         [&](std::size_t k) { return level_gap(con.params, k); }, con.levels.size(), 1);
  }
  std::string csv = "k,count,m_k,eps_k,window_size,claim3,all_pass,falconer_approx\n";
  for (std::size_t i = 0; i < con.levels.size(); ++i) {
    const auto& r = con.reports[i];
    std::string fv;
    if (fal) {
      for (const auto& smp : fal->samples) {
        if (smp.k == i + 1) fv = fmt(approx(smp.value));
      }
    }
    csv += std::to_string(i + 1) + "," + std::to_string(con.levels[i].intervals.size()) + "," +
           std::to_string(r.min_count) + "," + to_string(con.levels[i].eps) + "," + std::to_string(r.window_size) + "," +
           (r.claim3 ? "true" : "false") + "," + (r.all_pass() ? "true" : "false") + "," + fv + "\n";
  }
  return csv;
}

json transcript_file(const Transcript& t, const BigInt& q_bound) {
  json j = to_json(t);
  j["verification"] = to_json(verify_transcript(t));
  j["post_check"] = to_json(post_check(t, q_bound));
  return j;
}

namespace {

ConstructionParams params_of(const ConfigSection& s, std::size_t depth) {
  auto x = RealDescriptor::parse(s.require("x"));
  return make_params(x, parse_rational(s.get("lambda", "2")), parse_mode(s.require("mode")), depth,
                     parse_enumeration(s.get("enumerate", "full")), count_of(s, "seed", 0), count_of(s, "width", 1),
                     optional_int(s, "M"));
}

TaskOutput run_construct(const ConfigSection& s, const std::string& dir) {
  auto p = params_of(s, count_of(s, "depth", 1));
  auto con = build_construction(p);
  std::optional<DimensionReport> dim;
  if (const auto* e = s.find("dimension_K")) {
    std::size_t K = parse_integer(e->value).get_ui();
    if (p.M < 64) throw ConfigError("line " + std::to_string(e->line) + ": dimension block needs M >= 64");
    dim = dimension_report(p.M, K, std::max<std::size_t>(1, K / 100));
  }
  TaskOutput out;
  out.files.emplace_back(dir + "/cert.json", dump_certificate(construction_certificate(con, dim)));

  json levels = json::array();
  std::size_t a_min = SIZE_MAX, b_min = SIZE_MAX, c_min = SIZE_MAX, e_min = SIZE_MAX, claim1 = 0, claim2 = 0;
  bool all = true;
  for (std::size_t i = 0; i < con.levels.size(); ++i) {
    const auto& r = con.reports[i];
    all = all && r.all_pass();
    levels.push_back({{"k", i + 1},
                      {"count", con.levels[i].intervals.size()},
                      {"min_count", r.min_count},
                      {"window_size", r.window_size},
                      {"claim3", r.claim3},
                      {"all_pass", r.all_pass()}});
    if (i == 0) continue;
    for (const auto& pr : con.levels[i].reports) {
      a_min = std::min(a_min, pr.a_count);
      b_min = std::min(b_min, pr.b_count);
      c_min = std::min(c_min, pr.c_count);
      e_min = std::min(e_min, pr.e_count);
      claim1 = std::max(claim1, pr.max_strips_touching_parent);
      claim2 = std::max(claim2, pr.max_children_per_strip);
    }
  }
  out.files.emplace_back(dir + "/levels.csv", levels_csv(con));
  out.summary = {{"M", p.M},
                 {"c", to_string(p.c)},
                 {"c_exponent", p.c_exponent},
                 {"mode", to_string(p.mode)},
                 {"depth", p.depth},
                 {"all_pass", all},
                 {"levels", levels}};
  if (con.levels.size() >= 2) {
    out.summary["stage_min"] = {{"A", a_min}, {"B", b_min}, {"C", c_min}, {"E", e_min}};
    out.summary["max_strips_touching_parent"] = claim1;
    out.summary["max_children_per_strip"] = claim2;
    auto box = box_count_diagnostic(con.levels);
    std::string bcsv = "j,boxes\n";
    for (const auto& [j, n] : box.points) bcsv += std::to_string(j) + "," + std::to_string(n) + "\n";
    out.files.emplace_back(dir + "/boxcount.csv", bcsv);
    out.summary["box_count_slope"] = box.slope;
    out.summary["box_count_degenerate"] = box.degenerate;
  }
  if (dim) {
    out.summary["dimension"] = {{"closed_form", to_string(dim->closed_form.value.lo)},
                                {"closed_form_exact", dim->closed_form.exact},
                                {"falconer_K", dim->falconer.K},
                                {"falconer_at_K_approx", approx(dim->falconer.at_K)}};
  }
  return out;
}

TaskOutput run_point(const ConfigSection& s, const std::string& dir) {
  std::size_t depth = count_of(s, "depth", 1);
  auto p = params_of(s, depth);
  auto seeds = parse_seed_range(s.require("seeds"));
  std::vector<PointCertificate> certs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { certs[i] = sample_point(p, depth, seeds[i]); });
  TaskOutput out;
  bool levels_pass = true, positive = true, above = true, holds = true;
  std::optional<BigRational> min_floor;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& c = certs[i];
    for (const auto& r : c.level_reports) levels_pass = levels_pass && r.all_pass();
    for (const auto& b : c.products) {
      positive = positive && b.product.lo > 0;
      above = above && b.product.lo > c.floor;
    }
    holds = holds && point_certificate_holds(c, p.x);
    if (!min_floor || c.floor < *min_floor) min_floor = c.floor;
    out.files.emplace_back(dir + "/point_" + std::to_string(seeds[i]) + ".json",
                           dump_certificate(point_certificate(p, depth, seeds[i], c)));
  }
  out.summary = {{"M", p.M},
                 {"depth", depth},
                 {"seeds", seeds.size()},
                 {"levels_pass", levels_pass},
                 {"products_positive", positive},
                 {"products_above_floor", above},
                 {"certificates_hold", holds},
                 {"min_floor", to_string(*min_floor)},
                 {"min_floor_approx", approx(*min_floor)}};
  return out;
}

TaskOutput run_game(const ConfigSection& s, const std::string& dir) {
  GameConfig cfg;
  cfg.alpha = parse_rational(s.get("alpha", "1/2"));
  cfg.beta = parse_rational(s.require("beta"));
  cfg.D = DSequence::parse(s.get("D", "const:2"));
  if (const auto* e = s.find("threshold")) cfg.threshold = parse_rational(e->value);
  auto advs = split_list(s.get("adversaries", "random,leftmost,rightmost,hostile"));
  auto seeds = parse_seed_range(s.get("seeds", "1"));
  std::size_t rounds = count_of(s, "rounds", 30);
  BigInt q_bound = parse_integer(s.get("q_bound", to_string(BigInt(BigInt(1) << 256))));
  bool save = s.get("save_transcripts", "true") == "true";

  const std::size_t n = advs.size() * seeds.size();
  std::vector<Transcript> games(n);
  std::vector<TranscriptReport> reports(n);
  std::vector<PostCheck> posts(n);
  parallel_for(n, [&](std::size_t i) {
    const auto& adv = advs[i / seeds.size()];
    auto seed = seeds[i % seeds.size()];
    games[i] = play(cfg, adv, rounds, seed);
    reports[i] = verify_transcript(games[i]);
    posts[i] = post_check(games[i], q_bound);
  });

  TaskOutput out;
  std::string csv = "adversary,seed,moves,c1_checks,c1_failures,claim1_checks,claim1_violations,ok,post_checked,divisible\n";
  json per_adv = json::object();
  std::size_t passed = 0, claim1_v = 0, divisible = 0, claim1_checks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& adv = advs[i / seeds.size()];
    const auto& r = reports[i];
    bool ok = r.ok() && posts[i].divisible == 0;
    passed += ok;
    claim1_v += r.claim1_violations;
    claim1_checks += r.claim1_checks;
    divisible += posts[i].divisible;
    if (!per_adv.contains(adv)) per_adv[adv] = {{"games", 0}, {"c1_pass", 0}};
    per_adv[adv]["games"] = per_adv[adv]["games"].get<std::size_t>() + 1;
    per_adv[adv]["c1_pass"] = per_adv[adv]["c1_pass"].get<std::size_t>() + (ok ? 1 : 0);
    csv += adv + "," + std::to_string(games[i].seed) + "," + std::to_string(games[i].moves.size()) + "," +
           std::to_string(r.c1_checks) + "," + std::to_string(r.c1_failures) + "," + std::to_string(r.claim1_checks) +
           "," + std::to_string(r.claim1_violations) + "," + (ok ? "true" : "false") + "," +
           std::to_string(posts[i].checked) + "," + std::to_string(posts[i].divisible) + "\n";
    if (save) {
      json t = to_json(games[i]);
      t["verification"] = to_json(r);
      t["post_check"] = to_json(posts[i]);
      out.files.emplace_back(dir + "/transcripts/" + adv + "_" + std::to_string(games[i].seed) + ".json",
                             dump_certificate(t));
    }
  }
  out.files.emplace_back(dir + "/summary.csv", csv);
  const auto k = derive_constants(cfg.beta, cfg.D, cfg.threshold);
  out.summary = {{"beta", to_string(cfg.beta)},
                 {"R", to_string(k.R)},
                 {"M", to_string(k.M)},
                 {"V0", to_string(k.V(0))},
                 {"rounds", rounds},
                 {"games", n},
                 {"c1_pass", passed},
                 {"claim1_checks", claim1_checks},
                 {"claim1_violations", claim1_v},
                 {"divisible_denominators", divisible},
                 {"per_adversary", per_adv}};
  return out;
}

TaskOutput run_mixed(const ConfigSection& s, const std::string& dir) {
  auto D = DSequence::parse(s.require("D"));
  auto x = RealDescriptor::parse(s.require("x"));
  std::size_t qmax = count_of(s, "qmax", 1000);
  BigRational eps = parse_rational(s.get("eps", "1/1000000000000"));
  std::vector<std::string> rows(qmax);
  std::vector<BigRational> lows(qmax);
  parallel_for(qmax, [&](std::size_t i) {
    BigInt q = static_cast<unsigned long>(i + 1);
    auto e = mixed_product_enclosure(q, x, D, eps);
    lows[i] = e.lo;
    rows[i] = to_string(q) + "," + std::to_string(omega_D(D, q)) + "," + to_string(d_norm(D, q)) + "," + to_string(e.lo) +
              "," + to_string(e.hi) + "," + fmt(approx(e)) + "\n";
  });
  TaskOutput out;
  std::string csv = "q,omega,norm,product_lo,product_hi,product_approx\n";
  std::size_t arg = 0;
  for (std::size_t i = 0; i < qmax; ++i) {
    csv += rows[i];
    if (lows[i] < lows[arg]) arg = i;
  }
  out.files.emplace_back(dir + "/table.csv", csv);
  out.summary = {{"D", D.text()}, {"x", x.text()}, {"rows", qmax}};
  if (qmax > 0) out.summary["min_product"] = {{"q", arg + 1}, {"lo", to_string(lows[arg])}, {"approx", approx(lows[arg])}};
  return out;
}

TaskOutput run_dimension(const ConfigSection& s, const std::string& dir) {
  std::size_t K = count_of(s, "K", 10000);
  std::size_t stride = count_of(s, "stride", std::max<std::size_t>(1, K / 100));
  TaskOutput out;
  json per = json::array();
  for (const auto& m_text : split_list(s.require("M"))) {
    std::int64_t M = parse_integer(m_text).get_si();
    auto rep = dimension_report(M, K, stride);
    out.files.emplace_back(dir + "/dimension_" + m_text + ".json",
                           dump_certificate(json{{"kind", "dimension"}, {"report", to_json(rep)}}));
    std::string csv = "k,m_k,eps_k,falconer_lo,falconer_hi,falconer_approx\n";
    for (const auto& smp : rep.falconer.samples) {
      csv += std::to_string(smp.k) + "," + to_string(smp.m) + ",1/" + m_text + "^" + std::to_string(2 * smp.k + 3) + "," +
             to_string(smp.value.lo) + "," + to_string(smp.value.hi) + "," + fmt(approx(smp.value)) + "\n";
    }
    out.files.emplace_back(dir + "/falconer_" + m_text + ".csv", csv);
    per.push_back({{"M", M},
                   {"closed_form", rep.closed_form.exact ? to_string(rep.closed_form.value.lo) : fmt(approx(rep.closed_form.value))},
                   {"closed_form_exact", rep.closed_form.exact},
                   {"falconer_K", K},
                   {"falconer_at_K_approx", approx(rep.falconer.at_K)},
                   {"falconer_tail_min_approx", approx(rep.falconer.tail_min)},
                   {"corollary1_total_approx", approx(rep.corollary.total)},
                   {"corollary1_limit", to_string(rep.corollary.limit)}});
  }
  out.summary = {{"bounds", per}};
  return out;
}

TaskOutput run_lemma1(const ConfigSection& s, const std::string& dir) {
  auto x = RealDescriptor::parse(s.require("x"));
  BigRational c = parse_rational(s.require("c"));
  auto rep = lemma1_brute_check(x, c, parse_integer(s.require("A_max")).get_si(), parse_integer(s.require("B_max")).get_si());
  TaskOutput out;
  out.files.emplace_back(dir + "/lemma1.json",
                         dump_certificate(json{{"kind", "lemma1"}, {"x", x.text()}, {"c", to_string(c)}, {"report", to_json(rep)}}));
  out.summary = {{"x", x.text()}, {"c", to_string(c)}, {"report", to_json(rep)}};
  return out;
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
  RunManifest m;
  m.version = kToolVersion;
  m.config_hash = config.hash();
  m.started = now_utc();
  for (const auto& s : config.sections) {
    if (s.kind == "run") {
      if (const auto* e = s.find("threads")) setenv("LAB_THREADS", e->value.c_str(), 1);
    }
  }
  m.threads = worker_count();
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "config.txt", config.to_text());

  static const std::map<std::string, std::function<TaskOutput(const ConfigSection&, const std::string&)>> runners{
      {"construct", run_construct}, {"point", run_point},         {"game", run_game},
      {"mixed", run_mixed},         {"dimension", run_dimension}, {"lemma1", run_lemma1}};
  for (std::size_t i = 0; i < config.sections.size(); ++i) {
    const auto& s = config.sections[i];
    if (s.kind == "run") continue;
    TaskRecord rec;
    rec.name = s.name(i);
    rec.kind = s.kind;
    try {
      auto result = runners.at(s.kind)(s, rec.name);
      for (const auto& [rel, content] : result.files) {
        write_file_atomic(out_dir / rel, content);
        rec.artifacts.push_back(rel);
      }
      rec.summary = std::move(result.summary);
      rec.status = "ok";
    } catch (const Error& e) {
      rec.status = "failed";
      rec.exit_code = e.exit_code();
      rec.error = e.what();
      rec.summary = json::object();
    }
    m.tasks.push_back(std::move(rec));
  }
  m.finished = now_utc();
  write_file_atomic(out_dir / "manifest.json", to_json(m).dump(2) + "\n");
  return m;
}

// --- report ------------------------------------------------------------------

Report emit_report(const RunManifest& manifest, const fs::path& out_dir) {
  Report rep;
  if (manifest.tasks.empty()) {
    rep.warnings.push_back("manifest has no tasks");
    return rep;
  }
  for (const auto& t : manifest.tasks) {
    for (const auto& a : t.artifacts) {
      if (!fs::exists(out_dir / a)) throw ReportError("missing artifact " + a + " of task " + t.name);
    }
  }
  std::ostringstream os;
  std::string fal_csv = "task,M,k,falconer_approx\n";
  std::string box_csv = "task,j,boxes\n";
  std::string game_csv = "task,beta,adversary,games,c1_pass,rate\n";
  bool have_fal = false, have_box = false, have_game = false;

  auto csv_rows = [&](const std::string& rel) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read_file(out_dir / rel));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::string cell;
      std::istringstream ls(line);
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  };

  for (const auto& t : manifest.tasks) {
    const auto& s = t.summary;
    if (t.status != "ok") {
      os << t.kind << " " << t.name << ": FAILED (exit " << t.exit_code << "): " << t.error << "\n";
      continue;
    }
    if (t.kind == "construct") {
      std::size_t passing = 0;
      for (const auto& l : s.at("levels")) passing += l.at("all_pass").get<bool>();
      os << "construct " << t.name << ": M=" << s.at("M") << ", c=4^-" << s.at("c_exponent") << ", "
         << s.at("mode").get<std::string>() << ", conditions pass on " << passing << "/" << s.at("levels").size()
         << " levels [" << t.name << "/cert.json]\n";
      for (const auto& l : s.at("levels")) {
        os << "  level " << l.at("k") << ": " << l.at("count") << " intervals, min per parent " << l.at("min_count")
           << ", window size " << l.at("window_size") << "\n";
      }
      if (s.contains("stage_min")) {
        const auto& st = s.at("stage_min");
        os << "  stage minima |A|=" << st.at("A") << " |B|=" << st.at("B") << " |C|=" << st.at("C") << " |E|="
           << st.at("E") << "; strips per parent <= " << s.at("max_strips_touching_parent")
           << ", children per strip <= " << s.at("max_children_per_strip") << "\n";
        os << "  box-count slope (diagnostic): " << fmt(s.at("box_count_slope").get<double>()) << "\n";
        for (const auto& row : csv_rows(t.name + "/boxcount.csv")) box_csv += t.name + "," + row[0] + "," + row[1] + "\n";
        have_box = true;
      }
      if (s.contains("dimension")) {
        os << "Step-11 bound (M=" << s.at("M") << "): " << s.at("dimension").at("closed_form").get<std::string>() << "\n";
      }
    } else if (t.kind == "point") {
      os << "point " << t.name << ": " << s.at("seeds") << " paths to depth " << s.at("depth")
         << (s.at("certificates_hold").get<bool>() ? ", all certificates hold" : ", CERTIFICATE FAILURE")
         << (s.at("levels_pass").get<bool>() ? ", all level reports pass" : ", LEVEL FAILURE")
         << ", min floor " << fmt(s.at("min_floor_approx").get<double>()) << " [" << t.name << "/point_*.json]\n";
    } else if (t.kind == "game") {
      os << "game " << t.name << " (beta=" << s.at("beta").get<std::string>() << ", M=" << s.at("M").get<std::string>()
         << "): (C1) pass " << s.at("c1_pass") << "/" << s.at("games") << ", Claim-1 violations "
         << s.at("claim1_violations") << ", divisible denominators " << s.at("divisible_denominators") << " ["
         << t.name << "/summary.csv]\n";
      for (const auto& [adv, v] : s.at("per_adversary").items()) {
        auto games = v.at("games").get<std::size_t>();
        auto pass = v.at("c1_pass").get<std::size_t>();
        os << "  " << adv << ": (C1) pass " << pass << "/" << games << "\n";
        game_csv += t.name + "," + s.at("beta").get<std::string>() + "," + adv + "," + std::to_string(games) + "," +
                    std::to_string(pass) + "," + fmt(games ? static_cast<double>(pass) / games : 0.0) + "\n";
        have_game = true;
      }
    } else if (t.kind == "dimension") {
      for (const auto& b : s.at("bounds")) {
        auto M = b.at("M").get<std::int64_t>();
        os << "Step-11 bound (M=" << M << "): " << b.at("closed_form").get<std::string>() << "\n";
        os << "  Falconer value at K=" << b.at("falconer_K") << ": " << fmt(b.at("falconer_at_K_approx").get<double>())
           << "; Corollary 1 total " << fmt(b.at("corollary1_total_approx").get<double>()) << " (limit "
           << b.at("corollary1_limit").get<std::string>() << ") [" << t.name << "/dimension_" << M << ".json]\n";
        for (const auto& row : csv_rows(t.name + "/falconer_" + std::to_string(M) + ".csv")) {
          fal_csv += t.name + "," + std::to_string(M) + "," + row[0] + "," + row[5] + "\n";
        }
        have_fal = true;
      }
    } else if (t.kind == "mixed") {
      os << "mixed " << t.name << ": " << s.at("rows") << " rows for D=" << s.at("D").get<std::string>();
      if (s.contains("min_product")) {
        os << ", min q|q|_D||qx|| " << fmt(s.at("min_product").at("approx").get<double>()) << " at q="
           << s.at("min_product").at("q");
      }
      os << " [" << t.name << "/table.csv]\n";
    } else if (t.kind == "lemma1") {
      const auto& r = s.at("report");
      os << "lemma1 " << t.name << ": " << r.at("counterexamples") << " counterexamples in " << r.at("pairs_checked")
         << " pairs (A<=" << r.at("A_max") << ", B<=" << r.at("B_max") << ", c=" << s.at("c").get<std::string>()
         << ") [" << t.name << "/lemma1.json]\n";
    }
  }
  rep.text = os.str();
  auto put = [&](bool have, const std::string& rel, const std::string& content) {
    if (!have) return;
    write_file_atomic(out_dir / rel, content);
    rep.plot_files.push_back(rel);
  };
  put(have_fal, "plots/falconer_curve.csv", fal_csv);
  put(have_box, "plots/boxcount.csv", box_csv);
  put(have_game, "plots/game_pass_rates.csv", game_csv);
  write_file_atomic(out_dir / "report.txt", rep.text);
  return rep;
}

}  // namespace dioph
