#include <doctest.h>

#include <random>

#include "coarsekit/decomposition.hpp"
#include "coarsekit/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coarsekit;

namespace {

SpacePtr share(FiniteMetricSpace s) { return std::make_shared<const FiniteMetricSpace>(std::move(s)); }

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (auto i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

Cover p10_cover() { return Cover(share(path_space(10)), {{"L", range(0, 5)}, {"R", range(4, 9)}}); }

std::vector<std::vector<std::int64_t>> ticks_of(const FiniteMetricSpace& X) {
  std::vector<std::vector<std::int64_t>> d(X.size(), std::vector<std::int64_t>(X.size()));
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X.size(); ++j) d[i][j] = X.ticks(i, j);
  return d;
}

// Oracle: max over x of the number of sets meeting the open ball B(x, t).
std::size_t brute_d_multiplicity(const Cover& c, const std::vector<std::vector<std::int64_t>>& d, std::int64_t t) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    std::size_t k = 0;
    for (const auto& s : c.sets()) {
      bool meets = false;
      for (auto y : s.members) meets = meets || d[x][y] < t;
      k += meets;
    }
    best = std::max(best, k);
  }
  return best;
}

}  // namespace

TEST_CASE("cover statistics") {
  auto P = share(path_space(10));
  const Cover whole(P, {{"X", range(0, 9)}});
  const auto s = cover_stats(whole);
  CHECK(s.multiplicity == 1);
  CHECK(s.lebesgue.infinite);

  const auto c = p10_cover();
  const auto t = cover_stats(c, {Rational(1)});
  CHECK(t.multiplicity == 2);
  CHECK(t.mesh == 5);
  CHECK(t.lebesgue == ExtendedRational::finite(Rational(2)));
  CHECK(t.d_multiplicity.at(Rational(1)) == 2);
  CHECK(c.validate().ok());
}

TEST_CASE("covers must be nonempty and in range") {
  auto P = share(path_space(3));
  CHECK_THROWS_AS(Cover(P, {{"A", {}}}), Error);
  CHECK_THROWS_AS(Cover(P, {{"A", {7}}}), Error);
  CHECK(Cover(P, {{"A", {0}}}).validate().has_rule("cover.union"));
}

TEST_CASE("conditions A and B") {
  const std::vector<Cover> covers{p10_cover()};
  CHECK(check_condition_A(covers, Rational(1), 1, Rational(5)));
  CHECK_FALSE(check_condition_A(covers, Rational(1), 0, Rational(5)));
  CHECK(check_condition_B(covers, Rational(2), 1, Rational(5)));
  CHECK_FALSE(check_condition_B(covers, Rational(6), 1, Rational(5)));
  CHECK(condition_B_report(covers, Rational(6), 1, Rational(5)).has_rule("condB.lebesgue"));

  auto P3 = share(path_space(3));
  auto P7 = share(path_space(7));
  const std::vector<Cover> single{Cover(P3, {{"A", range(0, 2)}}), Cover(P7, {{"B", range(0, 6)}})};
  CHECK(check_condition_A(single, Rational(100), 0, Rational(6)));
  CHECK_FALSE(check_condition_A(single, Rational(100), 0, Rational(5)));
}

TEST_CASE("verify_certificate on the interval blocks") {
  const auto cert = fixtures::zline_certificate();
  CHECK(verify_certificate(cert).ok());

  const auto bad = fixtures::zline_certificate(Rational(7));
  const auto report = verify_certificate(bad);
  REQUIRE_FALSE(report.ok());
  const auto* f = report.first(Severity::Violation);
  CHECK(f->rule == "cert.disjoint");
  CHECK(f->witness[1] == "0");

  DecompositionCertificate one;
  one.family = {share(path_space(1))};
  one.r = 5;
  one.n = 0;
  one.pieces = {{"p", 0, 0, {0}}};
  one.witness = BoundedWitness{Rational(0)};
  CHECK(verify_certificate(one).ok());
}

TEST_CASE("certificate faults are named") {
  auto cert = fixtures::zline_certificate();
  cert.pieces[0].members.erase(cert.pieces[0].members.begin());
  CHECK(verify_certificate(cert).has_rule("cert.union"));

  cert = fixtures::zline_certificate();
  cert.witness = BoundedWitness{Rational(4)};
  CHECK(verify_certificate(cert).has_rule("cert.diameter"));

  cert = fixtures::zline_certificate();
  cert.depth = 2;
  CHECK(verify_certificate(cert).has_rule("cert.depth"));
}

TEST_CASE("certificate_to_condB") {
  const auto c = certificate_to_condB(fixtures::zline_certificate());
  CHECK(c.lambda == Rational(3, 2));
  CHECK(c.D == 8);
  CHECK(c.report.ok());
  const auto s = cover_stats(c.covers[0]);
  CHECK(s.multiplicity <= 2);
  CHECK(s.lebesgue.at_least(Rational(3, 2)));
  CHECK(s.mesh <= 8);

  DecompositionCertificate one;
  one.family = {share(path_space(1))};
  one.r = 1;
  one.pieces = {{"p", 0, 0, {0}}};
  one.witness = BoundedWitness{Rational(0)};
  const auto w = certificate_to_condB(one);
  CHECK(w.covers[0].size() == 1);
  CHECK(w.covers[0].sets()[0].members.size() == 1);

  // Two far components of one color stay disjoint after fattening.
  auto far = share(FiniteMetricSpace("far", {"a", "b"}, {{Rational(0), Rational(10)}, {Rational(10), Rational(0)}}));
  DecompositionCertificate two;
  two.family = {far};
  two.r = 4;
  two.pieces = {{"a", 0, 0, {0}}, {"b", 0, 0, {1}}};
  two.witness = BoundedWitness{Rational(0)};
  const auto t = certificate_to_condB(two);
  CHECK(multiplicity(t.covers[0]) == 1);

  auto broken = fixtures::zline_certificate(Rational(7));
  CHECK_THROWS_WITH_AS(certificate_to_condB(broken), doctest::Contains("CertificateInvalid"), Error);
}

TEST_CASE("search_decomposition") {
  auto P = share(path_space(4));
  const auto single = search_decomposition(P, Rational(1), 0, Rational(3));
  REQUIRE(single.certificate);
  CHECK(single.certificate->pieces.size() == 1);

  auto Z = share(integer_interval(0, 30));
  const auto z = search_decomposition(Z, Rational(3), 1, Rational(5));
  REQUIRE(z.certificate);
  CHECK(verify_certificate(*z.certificate).ok());

  auto P12 = share(path_space(12));
  CHECK_FALSE(search_decomposition(P12, Rational(20), 0, Rational(2)).certificate);

  SearchOptions tiny;
  tiny.node_budget = 3;
  CHECK_THROWS_WITH_AS(search_decomposition(Z, Rational(3), 1, Rational(5), tiny), doctest::Contains("Timeout"), Error);

  SearchOptions seeded;
  seeded.seed = 17;
  const auto s = search_decomposition(Z, Rational(3), 1, Rational(5), seeded);
  REQUIRE(s.certificate);
  CHECK(verify_certificate(*s.certificate).ok());
}

TEST_CASE("property: multiplicity is d-multiplicity just above zero") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_graph(rng, 5 + trial % 40, 6);
    auto X = share(oracle::to_space(g));
    const Cover c(X, oracle::random_cover(rng, X->size(), 1 + trial % 7, 0.3));
    std::int64_t min_positive = oracle::kInf;
    for (std::size_t i = 0; i < X->size(); ++i)
      for (std::size_t j = 0; j < X->size(); ++j)
        if (i != j) min_positive = std::min(min_positive, g.dist[i][j]);
    Rational half(static_cast<long>(min_positive), 2L);
    half.canonicalize();
    CHECK(multiplicity(c) == d_multiplicity(c, half));
    for (std::int64_t t = 1; t <= 8; ++t) CHECK(d_multiplicity(c, Rational(static_cast<long>(t)), 2) == brute_d_multiplicity(c, g.dist, t));
  }
}

TEST_CASE("property: Lebesgue number matches the oracle") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_graph(rng, 6 + trial % 20, 4);
    auto X = share(oracle::to_space(g));
    const Cover c(X, oracle::random_cover(rng, X->size(), 4, 0.5));
    std::int64_t best = oracle::kInf;
    bool whole = false;
    for (const auto& s : c.sets()) whole = whole || s.members.size() == X->size();
    for (std::size_t x = 0; x < X->size() && !whole; ++x) {
      std::int64_t here = 0;
      for (const auto& s : c.sets()) {
        if (!std::binary_search(s.members.begin(), s.members.end(), x)) continue;
        std::int64_t co = oracle::kInf;
        for (std::size_t y = 0; y < X->size(); ++y)
          if (!std::binary_search(s.members.begin(), s.members.end(), y)) co = std::min(co, g.dist[x][y]);
        here = std::max(here, co);
      }
      best = std::min(best, here);
    }
    const auto L = lebesgue_number(c, 2);
    CHECK(L.infinite == whole);
    if (!whole) CHECK(L.value == static_cast<long>(best));
  }
}

TEST_CASE("property: random certificates, monotonicity and condition B conversion") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = oracle::random_graph(rng, 10 + trial, 6, 0.3);
    auto X = share(oracle::to_space(g));
    const std::int64_t scale = 1 + trial % 4;
    DecompositionCertificate cert;
    cert.family = {X};
    cert.r = Rational(static_cast<long>(scale));
    cert.n = 1 + trial % 2;
    cert.pieces = oracle::random_decomposition(rng, ticks_of(*X), cert.n + 1, 1, scale);
    std::int64_t D = 0;
    for (const auto& p : cert.pieces) D = std::max(D, oracle::diameter(g.dist, p.members));
    cert.witness = BoundedWitness{Rational(static_cast<long>(D))};
    REQUIRE(verify_certificate(cert).ok());
    for (int s = 0; s <= scale; ++s) {
      auto smaller = cert;
      smaller.r = Rational(s);
      CHECK(verify_certificate(smaller).ok());
    }
    const auto b = certificate_to_condB(cert);
    CHECK(check_condition_B(b.covers, cert.r / 2, cert.n, cert.bound() + cert.r));
  }
}

TEST_CASE("property: search output always verifies") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = oracle::random_graph(rng, 6 + trial % 6, 5, 0.2);
    auto X = share(oracle::to_space(g));
    SearchOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    const auto res = search_decomposition(X, Rational(2), 1, Rational(6), o);
    if (res.certificate) CHECK(verify_certificate(*res.certificate).ok());
  }
}
