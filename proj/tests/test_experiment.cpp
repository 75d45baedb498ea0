#include "doctest.h"

#include <filesystem>

#include "dioph/certificates.hpp"
#include "dioph/errors.hpp"
#include "dioph/experiment.hpp"

using namespace dioph;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("dioph_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSmall = R"(# small run
[construct]
name = feas
x = cf: 1; (2)
mode = feasible
M = 16
depth = 3

[game]
name = g
beta = 1/2
adversaries = random, hostile
seeds = 1..3
rounds = 12

[dimension]
M = 1024
K = 400
)";

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = parse_config(kSmall);
  REQUIRE(cfg.sections.size() == 3);
  CHECK(cfg.sections[0].kind == "construct");
  CHECK(cfg.sections[0].get("x", "") == RealDescriptor::sqrt2().text());
  CHECK(cfg.sections[1].get("adversaries", "") == "random,hostile");
  CHECK(cfg.sections[2].name(2) == "dimension2");
  CHECK(parse_config(cfg.to_text()).to_text() == cfg.to_text());
  CHECK(parse_config(cfg.to_text()).hash() == cfg.hash());
  CHECK(cfg.hash().size() == 64);
  CHECK(parse_config("[game]\nbeta = 2/4\n").to_text() == "[game]\nbeta = 1/2\n");
  CHECK(parse_config("[game]\nbeta = 2/4\n").hash() == parse_config("[game]\nbeta=1/2\n").hash());
}

TEST_CASE("config errors carry line and field") {
  CHECK(error_of("") == "config is empty");
  CHECK(error_of("# only a comment\n\n") == "config is empty");
  CHECK(error_of("[nonsense]\n").find("line 1") != std::string::npos);
  auto bad_value = error_of("[game]\nbeta = one half\n");
  CHECK(bad_value.find("line 2") != std::string::npos);
  CHECK(bad_value.find("beta") != std::string::npos);
  CHECK(error_of("[game]\nbeta = 1/2\ncolour = red\n").find("colour") != std::string::npos);
  CHECK(error_of("beta = 1/2\n").find("before any") != std::string::npos);
  CHECK(error_of("[game]\n").find("beta") != std::string::npos);
  CHECK(error_of("[game]\nbeta = 1/2\nbeta = 1/3\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[construct]\nx = cf: 1 (2)\nmode = strict\ndepth = 1\n").find("line 2") != std::string::npos);
  CHECK(error_of("[game]\nbeta = 1/2\nadversaries = random, cunning\n").find("adversaries") != std::string::npos);
  CHECK(error_of("[game]\nbeta = 1/2\nseeds = 9..3\n").find("seeds") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/dioph.cfg"), ConfigError);
}

TEST_CASE("seed ranges") {
  CHECK(parse_seed_range("1..4") == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK(parse_seed_range("7, 3") == std::vector<std::uint64_t>{7, 3});
  CHECK(parse_seed_range("5") == std::vector<std::uint64_t>{5});
  CHECK_THROWS(parse_seed_range("4..1"));
  CHECK_THROWS(parse_seed_range("-1"));
}

TEST_CASE("run, manifest and report") {
  auto dir = scratch("run");
  auto m = run_experiment(parse_config(kSmall), dir);
  REQUIRE(m.tasks.size() == 3);
  CHECK(m.exit_code() == 0);
  for (const auto& t : m.tasks) {
    CHECK(t.status == "ok");
    for (const auto& a : t.artifacts) CHECK(fs::exists(dir / a));
  }
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "feas/cert.json"));
  CHECK(fs::exists(dir / "feas/levels.csv"));
  CHECK(fs::exists(dir / "g/summary.csv"));
  CHECK(fs::exists(dir / "g/transcripts/hostile_2.json"));

  auto cert = json::parse(read_file(dir / "feas/cert.json"));
  CHECK(verify_certificate(cert).ok);
  CHECK(verify_certificate(json::parse(read_file(dir / "g/transcripts/random_3.json"))).ok);

  auto back = manifest_from_json(json::parse(read_file(dir / "manifest.json")));
  CHECK(back.tasks.size() == 3);
  CHECK(back.config_hash == parse_config(kSmall).hash());

  auto rep = emit_report(back, dir);
  CHECK(rep.warnings.empty());
  CHECK(rep.text.find("Step-11 bound (M=1024): 1/4") != std::string::npos);
  CHECK(rep.text.find("(C1) pass 6/6") != std::string::npos);
  CHECK(rep.text.find("conditions pass on 3/3 levels") != std::string::npos);
  CHECK(rep.plot_files.size() == 3);
  for (const auto& f : rep.plot_files) CHECK(fs::exists(dir / f));

  fs::remove(dir / "g/summary.csv");
  CHECK_THROWS_AS(emit_report(back, dir), ReportError);
  fs::remove_all(dir);
}

TEST_CASE("failed tasks are recorded") {
  auto dir = scratch("fail");
  auto m = run_experiment(parse_config("[construct]\nx = cf: 1; (2)\nmode = strict\nM = 16\ndepth = 1\n"), dir);
  REQUIRE(m.tasks.size() == 1);
  CHECK(m.tasks[0].status == "failed");
  CHECK(m.tasks[0].exit_code == 4);
  CHECK(m.exit_code() == 4);
  auto rep = emit_report(m, dir);
  CHECK(rep.text.find("FAILED") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("empty manifest") {
  RunManifest m;
  auto rep = emit_report(m, scratch("empty"));
  CHECK(rep.text.empty());
  REQUIRE(rep.warnings.size() == 1);
}

TEST_CASE("runs are byte-identical") {
  auto a = scratch("det_a"), b = scratch("det_b");
  run_experiment(parse_config(kSmall), a);
  run_experiment(parse_config(kSmall), b);
  for (const auto* rel : {"feas/cert.json", "feas/levels.csv", "g/summary.csv", "g/transcripts/random_1.json",
                          "dimension2/dimension_1024.json"}) {
    CHECK(read_file(a / rel) == read_file(b / rel));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("atomic writes leave no temporary files") {
  auto dir = scratch("atomic");
  write_file_atomic(dir / "nested/out.txt", "one");
  write_file_atomic(dir / "nested/out.txt", "two");
  CHECK(read_file(dir / "nested/out.txt") == "two");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "nested")) files += e.is_regular_file();
  CHECK(files == 1);
  fs::remove_all(dir);
}
