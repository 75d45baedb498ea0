// dioph: command-line front end.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dioph/certificates.hpp"
#include "dioph/certified_log.hpp"
#include "dioph/errors.hpp"
#include "dioph/experiment.hpp"
#include "dioph/mixed_norm.hpp"

using namespace dioph;
namespace fs = std::filesystem;

namespace {

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw VerificationFailure(path + ": " + e.what());
  }
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_file_atomic(out, content);
  }
}

std::vector<std::int64_t> parse_digits(const std::string& text) {
  std::vector<std::int64_t> out;
  std::string cur;
  for (char ch : text + " ") {
    if (ch == ' ' || ch == ',') {
      if (!cur.empty()) out.push_back(parse_integer(cur).get_si());
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

int cmd_cf(const std::string& x_text, const std::string& rational, std::size_t n, bool as_json) {
  json rows = json::array();
  if (!rational.empty()) {
    auto digits = cf_of_rational(parse_rational(rational));
    for (std::size_t i = 0; i < digits.size(); ++i) rows.push_back({{"n", i}, {"a", to_string(digits[i])}});
  } else {
    auto x = RealDescriptor::parse(x_text);
    for (std::size_t i = 0; i <= n; ++i) {
      const auto& c = x.convergent(i);
      rows.push_back({{"n", i},
                      {"a", i == 0 ? to_string(x.a0()) : std::to_string(x.digit(i))},
                      {"p", to_string(c.p)},
                      {"q", to_string(c.q)}});
    }
  }
  if (as_json) {
    std::cout << rows.dump(2) << "\n";
    return 0;
  }
  for (const auto& r : rows) {
    std::cout << r["n"].get<std::size_t>() << "\t" << r["a"].get<std::string>();
    if (r.contains("p")) std::cout << "\t" << r["p"].get<std::string>() << "/" << r["q"].get<std::string>();
    std::cout << "\n";
  }
  return 0;
}

int cmd_interval(const std::string& digits_text, const std::string& x_text, const std::string& c_text,
                 const std::string& point, bool as_json) {
  auto digits = parse_digits(digits_text);
  auto iv = interval_of(digits);
  json j = to_json(iv);
  if (!point.empty()) j["contains"] = {{"point", to_string(parse_rational(point))}, {"result", contains(iv, parse_rational(point))}};
  std::optional<NicenessCertificate> cert;
  if (!x_text.empty()) {
    if (c_text.empty()) throw InvalidInput("--x needs --c");
    cert = is_nice(iv, RealDescriptor::parse(x_text), parse_rational(c_text));
    j["niceness"] = to_json(*cert);
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "interval [" << to_string(iv.lo) << ", " << to_string(iv.hi) << "]\n";
  std::cout << "length " << to_string(iv.length()) << "\n";
  std::cout << "denominators";
  for (const auto& q : iv.associated_denominators()) std::cout << " " << to_string(q);
  std::cout << "\n";
  if (j.contains("contains")) std::cout << "contains " << point << ": " << (j["contains"]["result"].get<bool>() ? "yes" : "no") << "\n";
  if (cert) {
    std::cout << (cert->nice() ? "nice" : "not nice") << "\n";
    for (const auto& v : cert->verdicts) {
      std::cout << "  q_" << v.k << " = " << to_string(v.q_k) << (v.ok ? " ok" : " FAIL") << "\n";
    }
  }
  return 0;
}

struct ConstructArgs {
  std::string x = "cf: 1; (2)";
  std::string lambda = "2";
  std::string mode = "feasible";
  std::optional<std::int64_t> M;
  std::size_t depth = 1;
  std::string enumerate = "full";
  std::uint64_t seed = 0;
  std::size_t width = 1;
  std::optional<std::size_t> dimension_K;
  std::optional<std::uint64_t> point;
  std::string out;
  std::string csv;
};

int cmd_construct(const ConstructArgs& a) {
  auto p = make_params(RealDescriptor::parse(a.x), parse_rational(a.lambda), parse_mode(a.mode), a.depth,
                       parse_enumeration(a.enumerate), a.seed, a.width, a.M);
  if (a.point) {
    auto cert = sample_point(p, a.depth, *a.point);
    bool ok = point_certificate_holds(cert, p.x);
    emit(a.out, dump_certificate(point_certificate(p, a.depth, *a.point, cert)));
    std::cerr << "point seed " << *a.point << ": " << cert.products.size() << " products, floor "
              << approx(cert.floor) << (ok ? ", holds" : ", FAILS") << "\n";
    return ok ? 0 : 2;
  }
  auto con = build_construction(p);
  std::optional<DimensionReport> dim;
  if (a.dimension_K) dim = dimension_report(p.M, *a.dimension_K, std::max<std::size_t>(1, *a.dimension_K / 100));
  emit(a.out, dump_certificate(construction_certificate(con, dim)));
  if (!a.csv.empty()) write_file_atomic(a.csv, levels_csv(con));
  bool all = true;
  std::cerr << "M=" << p.M << " c=4^-" << p.c_exponent << " " << to_string(p.mode) << "\n";
  for (const auto& r : con.reports) {
    all = all && r.all_pass();
    std::cerr << "level " << r.k << ": " << con.levels[r.k - 1].intervals.size() << " intervals, min per parent "
              << r.min_count << ", window " << r.window_size << (r.all_pass() ? ", pass" : ", FAIL") << "\n";
  }
  return all ? 0 : 2;
}

int cmd_verify(const std::string& path) {
  auto res = verify_certificate(load_json(path));
  std::cout << res.kind << ": " << (res.ok ? "ok" : "FAILED") << "\n";
  for (const auto& p : res.problems) std::cout << "  " << p << "\n";
  return res.ok ? 0 : 2;
}

int cmd_mixed(const std::string& d_text, const std::string& x_text, std::size_t qmax, const std::string& eps,
              const std::string& out) {
  auto D = DSequence::parse(d_text);
  auto x = RealDescriptor::parse(x_text);
  auto e = parse_rational(eps);
  std::string csv = "q,omega,norm,product_lo,product_hi,product_approx\n";
  for (std::size_t q = 1; q <= qmax; ++q) {
    BigInt Q = static_cast<unsigned long>(q);
    auto enc = mixed_product_enclosure(Q, x, D, e);
    std::ostringstream os;
    os << std::setprecision(10) << approx(enc);
    csv += std::to_string(q) + "," + std::to_string(omega_D(D, Q)) + "," + to_string(d_norm(D, Q)) + "," +
           to_string(enc.lo) + "," + to_string(enc.hi) + "," + os.str() + "\n";
  }
  emit(out, csv);
  return 0;
}

struct GameArgs {
  std::string beta = "1/2";
  std::string alpha = "1/2";
  std::string D = "const:2";
  std::vector<std::string> adversaries{"random"};
  std::size_t rounds = 30;
  std::string seeds = "1";
  std::optional<std::string> threshold;
  std::string out;
};

int cmd_game(const GameArgs& a) {
  GameConfig cfg;
  cfg.alpha = parse_rational(a.alpha);
  cfg.beta = parse_rational(a.beta);
  cfg.D = DSequence::parse(a.D);
  if (a.threshold) cfg.threshold = parse_rational(*a.threshold);
  std::vector<std::string> advs;
  for (const auto& item : a.adversaries) {
    std::stringstream ss(item);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!name.empty()) advs.push_back(name);
    }
  }
  for (const auto& name : advs) make_adversary(name);
  auto seeds = parse_seed_range(a.seeds);
  const BigInt q_bound = BigInt(1) << 256;
  std::size_t games = 0, passed = 0, violations = 0, divisible = 0;
  for (const auto& adv : advs) {
    std::size_t adv_pass = 0;
    for (auto seed : seeds) {
      auto t = play(cfg, adv, a.rounds, seed);
      auto j = transcript_file(t, q_bound);
      bool ok = j["verification"]["ok"].get<bool>() && j["post_check"]["divisible_by_M"].get<std::size_t>() == 0;
      ++games;
      passed += ok;
      adv_pass += ok;
      violations += j["verification"]["claim1_violations"].get<std::size_t>();
      divisible += j["post_check"]["divisible_by_M"].get<std::size_t>();
      if (!a.out.empty()) {
        write_file_atomic(fs::path(a.out) / (adv + "_" + std::to_string(seed) + ".json"), dump_certificate(j));
      }
    }
    std::cout << adv << ": (C1) pass " << adv_pass << "/" << seeds.size() << "\n";
  }
  std::cout << "total: (C1) pass " << passed << "/" << games << ", Claim-1 violations " << violations
            << ", divisible denominators " << divisible << "\n";
  return passed == games ? 0 : 2;
}

int cmd_report(const std::string& config, const std::string& out, const std::string& manifest_path) {
  RunManifest m;
  fs::path dir;
  if (!manifest_path.empty()) {
    json j;
    try {
      j = json::parse(read_file(manifest_path));
    } catch (const json::parse_error& e) {
      throw ReportError(manifest_path + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ReportError(e.what());
    }
    m = manifest_from_json(j);
    dir = fs::path(manifest_path).parent_path();
  } else {
    if (config.empty() || out.empty()) throw ConfigError("report needs --manifest, or --config with --out");
    m = run_experiment(load_config(config), out);
    dir = out;
  }
  auto rep = emit_report(m, dir);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << rep.text;
  for (const auto& f : rep.plot_files) std::cout << "plot data: " << (dir / f).string() << "\n";
  return m.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified continued-fraction, Cantor-set and Schmidt-game computations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string x_text, rational, c_text, point, digits_text, cert_path, out, csv, config, manifest;
  std::size_t n = 10;
  bool as_json = false;

  auto* cf = app.add_subcommand("cf", "Continued-fraction digits and convergents");
  cf->add_option("--x", x_text, "Real descriptor, e.g. \"cf: 1; (2)\"");
  cf->add_option("--rational", rational, "Expand a rational n/d instead");
  cf->add_option("-n,--terms", n, "Number of convergents")->capture_default_str();
  cf->add_flag("--json", as_json);

  auto* interval = app.add_subcommand("interval", "Fundamental interval of a digit tuple");
  interval->add_option("--digits", digits_text, "Digits a_1..a_n, space or comma separated")->required();
  interval->add_option("--x", x_text, "Target x for the niceness check");
  interval->add_option("--c", c_text, "Threshold c for the niceness check");
  interval->add_option("--point", point, "Rational to test for membership");
  interval->add_flag("--json", as_json);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build levels E_1..E_k and write a certificate");
  construct->add_option("--x", ca.x)->capture_default_str();
  construct->add_option("--lambda", ca.lambda)->capture_default_str();
  construct->add_option("--mode", ca.mode, "strict|feasible")->capture_default_str();
  construct->add_option("--M", ca.M, "Override the branching parameter");
  construct->add_option("--depth", ca.depth)->capture_default_str();
  construct->add_option("--enumerate", ca.enumerate, "full|sampled")->capture_default_str();
  construct->add_option("--seed", ca.seed)->capture_default_str();
  construct->add_option("--width", ca.width, "Parents kept per level when sampling")->capture_default_str();
  construct->add_option("--dimension-K", ca.dimension_K, "Attach a dimension report with this K");
  construct->add_option("--point", ca.point, "Emit a point certificate for this seed instead");
  construct->add_option("--out", ca.out, "Certificate path (stdout if omitted)");
  construct->add_option("--csv", ca.csv, "Per-level CSV path");

  auto* verify = app.add_subcommand("verify", "Re-check a certificate or transcript from the file alone");
  verify->add_option("--cert", cert_path)->required();

  std::string d_text = "const:2", eps = "1/1000000000000";
  std::size_t qmax = 1000;
  auto* mixed = app.add_subcommand("mixed", "Table of q, |q|_D and q|q|_D||qx||");
  mixed->add_option("--D", d_text)->capture_default_str();
  mixed->add_option("--x", x_text)->required();
  mixed->add_option("--qmax", qmax)->capture_default_str();
  mixed->add_option("--eps", eps, "Enclosure width")->capture_default_str();
  mixed->add_option("--out", out, "CSV path (stdout if omitted)");

  GameArgs ga;
  auto* game = app.add_subcommand("game", "Play and verify Schmidt games");
  game->add_option("--beta", ga.beta)->capture_default_str();
  game->add_option("--alpha", ga.alpha)->capture_default_str();
  game->add_option("--D", ga.D)->capture_default_str();
  game->add_option("--adversary", ga.adversaries, "random|leftmost|rightmost|hostile, repeatable or comma list");
  game->add_option("--rounds", ga.rounds)->capture_default_str();
  game->add_option("--seeds", ga.seeds, "a..b, a,b,c or a")->capture_default_str();
  game->add_option("--threshold", ga.threshold);
  game->add_option("--out", ga.out, "Directory for transcripts");

  auto* report = app.add_subcommand("report", "Run a config and summarize, or summarize a manifest");
  report->add_option("--config", config);
  report->add_option("--out", out);
  report->add_option("--manifest", manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  try {
    if (*cf) {
      if (x_text.empty() == rational.empty()) throw InvalidInput("give exactly one of --x and --rational");
      return cmd_cf(x_text, rational, n, as_json);
    }
    if (*interval) return cmd_interval(digits_text, x_text, c_text, point, as_json);
    if (*construct) return cmd_construct(ca);
    if (*verify) return cmd_verify(cert_path);
    if (*mixed) return cmd_mixed(d_text, x_text, qmax, eps, out);
    if (*game) return cmd_game(ga);
    if (*report) return cmd_report(config, out, manifest);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
