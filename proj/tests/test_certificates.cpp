#include "doctest.h"

#include "dioph/certificates.hpp"
#include "dioph/errors.hpp"

using namespace dioph;

namespace {

ConstructionParams feasible16(std::size_t depth) {
  return make_params(RealDescriptor::sqrt2(), 2, Mode::feasible, depth, Enumeration::full, 0, 1, 16);
}

json reparse(const json& j) { return json::parse(dump_certificate(j)); }

}  // namespace

TEST_CASE("params round trip") {
  auto p = feasible16(3);
  auto back = params_from_json(to_json(p));
  CHECK(back.M == 16);
  CHECK(back.c == p.c);
  CHECK(back.x.text() == p.x.text());
  CHECK(to_json(back) == to_json(p));
  auto bad = to_json(p);
  bad["c"] = "1/1024";
  CHECK_THROWS(params_from_json(bad));
}

TEST_CASE("construction certificate verifies from the file alone") {
  auto con = build_construction(feasible16(3));
  auto j = reparse(construction_certificate(con));
  auto r = verify_certificate(j);
  CHECK(r.kind == "construction");
  CHECK(r.ok);
  CHECK(r.problems.empty());
  auto levels = levels_from_certificate(j, con.params);
  REQUIRE(levels.size() == con.levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) CHECK(levels[i].intervals.size() == con.levels[i].intervals.size());
}

TEST_CASE("construction certificate with a dimension block") {
  auto p = make_params(RealDescriptor::sqrt2(), 2, Mode::feasible, 2, Enumeration::full, 0, 1, 64);
  auto con = build_construction(p);
  auto j = reparse(construction_certificate(con, dimension_report(64, 100)));
  CHECK(j["dimension"]["closed_form"]["lo"] == "1/12");
  CHECK(verify_certificate(j).ok);
  j["dimension"]["closed_form"]["lo"] = "1/11";
  CHECK_FALSE(verify_certificate(j).ok);
}

TEST_CASE("tampered construction certificates fail") {
  auto con = build_construction(feasible16(2));
  auto j = reparse(construction_certificate(con));

  auto digit = j;
  digit["levels"][1]["intervals"][0][1] = 2 * 16 + 1;
  auto r = verify_certificate(digit);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.problems.empty());

  auto cond = j;
  cond["conditions"][0]["min_count"] = 99;
  CHECK_FALSE(verify_certificate(cond).ok);

  auto eps = j;
  eps["levels"][0]["eps"] = "1/2";
  CHECK_FALSE(verify_certificate(eps).ok);
}

TEST_CASE("point certificate") {
  auto p = feasible16(3);
  auto cert = sample_point(p, 3, 11);
  auto j = reparse(point_certificate(p, 3, 11, cert));
  CHECK(verify_certificate(j).ok);
  auto back = point_from_json(j);
  CHECK(back.floor == cert.floor);
  CHECK(back.products.size() == cert.products.size());

  auto bad = j;
  bad["floor"] = "1/2";
  CHECK_FALSE(verify_certificate(bad).ok);
}

TEST_CASE("game certificates") {
  auto t = play(GameConfig{}, "random", 30, 3);
  auto j = reparse(to_json(t));
  CHECK(verify_certificate(j).ok);

  auto bad = j;
  bad["moves"][5]["lo"] = bad["moves"][4]["lo"];
  bad["moves"][5]["hi"] = bad["moves"][4]["hi"];
  CHECK_FALSE(verify_certificate(bad).ok);

  std::vector<Transcript> games{t, play(GameConfig{}, "hostile", 30, 3)};
  auto batch = reparse(game_batch(games, BigInt(1) << 256));
  auto r = verify_certificate(batch);
  CHECK(r.ok);
  CHECK(r.details["passed"] == 2);
}

TEST_CASE("dimension and Lemma 1 certificates") {
  json d{{"kind", "dimension"}, {"report", to_json(dimension_report(1024, 300, 30))}};
  CHECK(verify_certificate(reparse(d)).ok);
  d["report"]["falconer"]["K"] = 301;
  CHECK_FALSE(verify_certificate(reparse(d)).ok);

  auto x = RealDescriptor::golden();
  json l{{"kind", "lemma1"}, {"x", x.text()}, {"c", "1/6"}, {"report", to_json(lemma1_brute_check(x, BigRational(1, 6), 60, 60))}};
  CHECK(verify_certificate(reparse(l)).ok);
  l["report"]["counterexamples"] = 1;
  CHECK_FALSE(verify_certificate(reparse(l)).ok);
}

TEST_CASE("malformed certificates") {
  CHECK_THROWS_AS(verify_certificate(json{{"no_kind", 1}}), VerificationFailure);
  CHECK_THROWS_AS(verify_certificate(json{{"kind", "mystery"}}), VerificationFailure);
  CHECK_THROWS_AS(verify_certificate(json{{"kind", "construction"}}), VerificationFailure);
}

TEST_CASE("certificates are byte-identical across runs") {
  auto a = dump_certificate(construction_certificate(build_construction(feasible16(3))));
  auto b = dump_certificate(construction_certificate(build_construction(feasible16(3))));
  CHECK(a == b);
  CHECK(a.back() == '\n');
  auto p = feasible16(3);
  CHECK(dump_certificate(point_certificate(p, 3, 5, sample_point(p, 3, 5))) ==
        dump_certificate(point_certificate(p, 3, 5, sample_point(p, 3, 5))));
}
