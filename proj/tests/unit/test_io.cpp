#include <doctest.h>

#include <random>

#include "coarsekit/error.hpp"
#include "coarsekit/io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coarsekit;
using io::Json;

TEST_CASE("parse errors carry line and column") {
  CHECK_THROWS_WITH_AS(io::parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "in.json"),
                       doctest::Contains("ParseError: in.json:3:8:"), Error);
  CHECK_THROWS_WITH_AS(io::parse_json_text("", "empty.json"), doctest::Contains("empty.json:1:1:"), Error);
  CHECK_THROWS_WITH_AS(io::read_json_file("/nonexistent/x.json"), doctest::Contains("ParseError"), Error);
}

TEST_CASE("rationals") {
  CHECK(io::rational_from(Json(5)) == 5);
  CHECK(io::rational_from(Json("-2/6")) == Rational(-1, 3));
  CHECK(io::rational_to(Rational(3, 4)) == Json("3/4"));
  CHECK(io::rational_to(Rational(7)) == Json("7"));
  CHECK_THROWS_WITH_AS(io::rational_from(Json(1.5)), doctest::Contains("InputInvalid"), Error);
  CHECK_THROWS_AS(io::rational_from(Json("1/0")), Error);
}

TEST_CASE("spaces and families") {
  const auto P = io::parse_space(Json::parse(R"({"builtin":"path","n":4})"));
  CHECK(P->size() == 4);
  CHECK(P->distance(0, 3) == 3);
  const auto G = io::parse_space(Json::parse(R"({"builtin":"grid","lo":[0,0],"hi":[2,1]})"));
  CHECK(G->size() == 6);
  CHECK(G->distance(G->require_index("(0,0)"), G->require_index("(2,1)")) == 3);
  const auto E = io::parse_space(Json::parse(R"({"points":["a","b","c"],"edges":[["a","b","1/2"],["b","c",2]]})"));
  CHECK(E->distance(0, 2) == Rational(5, 2));
  CHECK_THROWS_WITH_AS(io::parse_space(Json::parse(R"({"builtin":"torus"})")), doctest::Contains("InputInvalid"), Error);
  CHECK_THROWS_WITH_AS(io::parse_space(Json::parse(R"({"points":["a","b"],"dist":[[0,1]]})")),
                       doctest::Contains("n x n"), Error);

  const auto fam = io::parse_family(
      Json::parse(R"([{"builtin":"integers","lo":0,"hi":9},{"parent":"Z","members":["2","5","9"],"id":"S"}])"));
  REQUIRE(fam.size() == 2);
  CHECK(fam[1]->id() == "S");
  CHECK(fam[1]->distance(fam[1]->require_index("5"), fam[1]->require_index("9")) == 4);
  CHECK_THROWS_AS(io::parse_family(Json::parse(R"([{"parent":"Q","members":["1"]}])")), Error);
}

TEST_CASE("property: space round trip") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_graph(rng, 2 + trial, 9);
    const auto X = oracle::to_space(g);
    const auto Y = io::parse_space(io::space_to_json(X));
    REQUIRE(Y->size() == X.size());
    CHECK(Y->labels() == X.labels());
    for (std::size_t a = 0; a < X.size(); ++a)
      for (std::size_t b = 0; b < X.size(); ++b) CHECK(Y->distance(a, b) == X.distance(a, b));
  }
}

TEST_CASE("windows") {
  const auto Z3 = io::parse_window(Json::parse(R"({
    "elements": ["0","1","2"], "identity": "0",
    "mult": [["0","1","2"],["1","2","0"],["2","0","1"]],
    "inv": ["0","2","1"], "gens": [{"s":"1","w":1},{"s":"2","w":1}]})"));
  CHECK(Z3->size() == 3);
  CHECK(Z3->validate().ok());

  const auto partial = io::parse_window(Json::parse(R"({
    "elements": ["-1","0","1"], "identity": "0",
    "mult": [[null,"-1","0"],["-1","0","1"],["0","1",null]],
    "inv": ["1","0","-1"], "gens": [{"s":"1","w":1},{"s":"-1","w":1}]})"));
  CHECK(partial->multiply(2, 2) == kOutside);

  const auto H = io::parse_window(Json::parse(R"({"builtin":"Heisenberg","radius":1})"));
  for (std::size_t g = 0; g < H->size(); ++g) CHECK(H->inverse(g) != kOutside);
  CHECK(io::parse_window(Json::parse(R"({"builtin":"D4"})"))->size() == 8);
  CHECK(io::parse_window(Json::parse(R"({"builtin":"Z^2","radius":1})"))->size() == 9);
  CHECK_THROWS_WITH_AS(io::parse_window(Json::parse(R"({"builtin":"SL2"})")), doctest::Contains("InputInvalid"), Error);
}

TEST_CASE("actions and G x X input") {
  const auto A = io::parse_action(Json::parse(R"({"window":{"builtin":"Z/2"},"X":["p","q"],"action":{"1,p":"q"}})"));
  CHECK(A->act(1, 0) == 1);
  CHECK(A->act(1, 1) == kOutside);

  const auto in = io::parse_gx(Json::parse(R"({"window":{"builtin":"Z/6"},"X":["0","1","2","3","4","5"],
    "action":"regular","metric_GX":{"product":{"lambda":1,"X_dist":[[0,1,2,3,2,1],[1,0,1,2,3,2],[2,1,0,1,2,3],
    [3,2,1,0,1,2],[2,3,2,1,0,1],[1,2,3,2,1,0]]}}})"));
  const auto f = fixtures::z6_bands();
  REQUIRE(in.metric->size() == f.metric->size());
  for (std::size_t a = 0; a < f.metric->size(); ++a)
    for (std::size_t b = 0; b < f.metric->size(); ++b) CHECK(in.metric->distance(a, b) == f.metric->distance(a, b));
}

TEST_CASE("certificate round trip") {
  const auto cert = fixtures::zline_certificate();
  const Json family = Json::parse(R"({"builtin":"integers","lo":0,"hi":30})");
  const auto j = io::certificate_to_json(cert, family);
  const auto back = io::parse_certificate(j);
  CHECK(back.r == cert.r);
  CHECK(back.n == cert.n);
  REQUIRE(back.pieces.size() == cert.pieces.size());
  for (std::size_t i = 0; i < cert.pieces.size(); ++i) {
    CHECK(back.pieces[i].name == cert.pieces[i].name);
    CHECK(back.pieces[i].color == cert.pieces[i].color);
    CHECK(back.pieces[i].members == cert.pieces[i].members);
  }
  CHECK(io::certificate_to_json(back, family) == j);
  CHECK(verify_certificate(back).ok());

  auto bad = j;
  bad["witness"]["type"] = "magic";
  CHECK_THROWS_WITH_AS(io::parse_certificate(bad), doctest::Contains("magic"), Error);
  bad = j;
  bad["pieces"][0]["members"].push_back("31");
  CHECK_THROWS_AS(io::parse_certificate(bad), Error);
}

TEST_CASE("complexes, points and covers") {
  const auto K = io::parse_complex(Json::parse(R"({"vertices":["a","b","c"],"simplices":[["a","b"],["b","c"]]})"));
  CHECK(K.dimension() == 1);
  CHECK(io::parse_complex(io::complex_to_json(K)).facets() == K.facets());
  const auto p = io::parse_nerve_point(Json::parse(R"({"coords":{"a":"1/3","b":"2/3","c":0}})"), K);
  CHECK(p.support() == std::vector<std::size_t>{0, 1});
  CHECK(io::parse_nerve_point(io::nerve_point_to_json(p, K), K) == p);
  CHECK_THROWS_AS(io::parse_nerve_point(Json::parse(R"({"coords":{"z":1}})"), K), Error);

  auto X = std::make_shared<const FiniteMetricSpace>(path_space(4));
  const auto c = io::parse_cover(Json::parse(R"({"sets":[{"name":"L","members":["0","1","2"]},{"members":["2","3"]}]})"), X);
  CHECK(c.sets()[1].name == "U1");
  CHECK(io::cover_to_json(c)["sets"][0]["members"] == Json::parse(R"(["0","1","2"])"));
}

TEST_CASE("F-covers and families") {
  const auto f = fixtures::z6_bands();
  const auto& G = f.gx->action().group_ptr();
  const auto fam = io::parse_subgroup_family(Json::parse(R"([{"name":"G","elements":"all"},{"name":"C2","elements":["0","3"]}])"), G);
  CHECK(fam.members()[0].elements.size() == 6);
  Json sets = Json::array();
  for (const auto& s : f.cover->sets()) {
    Json m = Json::array();
    for (auto y : s.members) m.push_back(f.gx->label(y));
    sets.push_back(Json{{"name", s.name}, {"members", m}, {"F", "G"}});
  }
  const auto fc = io::parse_fcover(Json{{"sets", sets}}, *f.gx, f.metric, fam);
  CHECK(fc.cover->sets()[0].members == f.cover->sets()[0].members);
  CHECK(check_N_F_amenable(*f.gx, fam, fc, f.S, f.N).verdict() == Verdict::Pass);
}

TEST_CASE("report json") {
  ValidationReport r;
  r.violation("x.y", "broken", {"a"});
  r.warning("x.z", "odd");
  const auto j = io::report_to_json(r);
  CHECK(j["verdict"] == "Fail");
  CHECK(j["violations"] == 1);
  CHECK(j["warnings"] == 1);
  CHECK(j["findings"][0]["witness"] == Json::parse(R"(["a"])"));
}
