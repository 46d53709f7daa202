#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "coarsekit/amenability.hpp"
#include "coarsekit/error.hpp"
#include "fixtures.hpp"

using namespace coarsekit;

namespace {

std::vector<std::size_t> all_of(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

struct CosetCover {
  GroupPtr G;
  ProductPtr gx;
  NormTablePtr norms;
  std::shared_ptr<const SubgroupFamilyWindow> family;
  FCoverWindow fc;
};

// Z/n acting on itself; U_c = {(g,x) : g = c mod d}, each a dZ/n-subset.
CosetCover coset_cover(std::size_t n, std::size_t d) {
  CosetCover c;
  c.G = std::make_shared<const GroupWindow>(cyclic_group(n));
  c.gx = std::make_shared<const ProductWindow>(std::make_shared<const ActionWindow>(regular_action(c.G)));
  c.norms = std::make_shared<const WordMetricTable>(word_norms(c.G, default_norm_radius(c.G)));
  std::vector<std::size_t> H;
  for (std::size_t g = 0; g < n; g += d) H.push_back(c.G->require_index(std::to_string(g)));
  std::sort(H.begin(), H.end());
  c.family = std::make_shared<const SubgroupFamilyWindow>(c.G, std::vector<SubgroupFamilyWindow::Member>{{"H", H}});
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(1)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0;
  auto metric = std::make_shared<const FiniteMetricSpace>(
      product_sum_metric(*c.gx, window_path_metric(*c.G), FiniteMetricSpace("X", c.gx->action().points(), m), Rational(1)));
  std::vector<CoverSet> sets(d);
  for (std::size_t k = 0; k < d; ++k) sets[k].name = "U" + std::to_string(k);
  for (std::size_t y = 0; y < c.gx->size(); ++y) {
    sets[std::stoul(c.G->label(c.gx->group_part(y))) % d].members.push_back(y);
  }
  c.fc.cover = std::make_shared<const Cover>(metric, sets);
  c.fc.assigned.assign(d, 0);
  return c;
}

}  // namespace

TEST_CASE("subgroup families") {
  const auto f = fixtures::z6_bands();
  const auto v = f.family->validate();
  CHECK(v.verdict() != Verdict::Fail);
  CHECK(v.has_rule("family.caveat"));

  const auto& G = f.gx->action().group_ptr();
  const SubgroupFamilyWindow bad(G, {{"B", {G->require_index("0"), G->require_index("1")}}});
  const auto b = bad.validate();
  CHECK(b.has_rule("family.product"));
  CHECK(b.has_rule("family.inverse"));
  const SubgroupFamilyWindow no_e(G, {{"E", {G->require_index("3")}}});
  CHECK(no_e.validate().has_rule("family.identity"));
}

TEST_CASE("F-subsets") {
  const auto f = fixtures::z6_bands();
  const auto& gx = *f.gx;
  const auto& G = gx.group();
  const auto e = G.require_index("0");
  const auto one = G.require_index("1");
  CHECK(is_F_subset({gx.index(e, 0)}, {e}, gx).ok());
  const auto r = is_F_subset({gx.index(e, 0), gx.index(one, 1)}, {e}, gx);
  REQUIRE(r.has_rule("fsubset.disjoint"));
  CHECK(r.first(Severity::Violation)->witness[0] == "1");
  CHECK(is_F_subset(f.cover->sets()[0].members, all_of(6), gx).ok());

  const auto z = fixtures::z_two_point(5);
  const auto u = is_F_subset(z.cover->sets()[0].members, all_of(11), *z.gx);
  CHECK(u.verdict() == Verdict::Uncertified);
  CHECK(u.has_rule("fsubset.window"));
}

TEST_CASE("N-F-amenable covers on the fixtures") {
  auto check = [](const fixtures::GXFixture& f) { return check_N_F_amenable(*f.gx, *f.family, f.fc, f.S, f.N); };
  CHECK(check(fixtures::z6_bands()).verdict() == Verdict::Pass);
  CHECK(check(fixtures::z6_stabilizer()).verdict() == Verdict::Pass);
  CHECK(check(fixtures::z_two_point()).verdict() == Verdict::Uncertified);
  CHECK(check(fixtures::z_rotation()).verdict() == Verdict::Uncertified);

  auto dim = fixtures::z6_bands();
  dim.N = 0;
  CHECK(check(dim).has_rule("cover.dimension"));

  auto capture = fixtures::z6_bands();
  const auto& G = capture.gx->group();
  capture.S = {G.require_index("0"), G.require_index("1"), G.require_index("2")};
  const auto c = check(capture);
  REQUIRE(c.has_rule("cover.capture"));
  CHECK(c.first(Severity::Violation)->witness[0] == "1");

  auto dropped = fixtures::z6_stabilizer();
  auto sets = dropped.cover->sets();
  sets.erase(sets.begin() + 2);
  dropped.fc.cover = std::make_shared<const Cover>(dropped.metric, sets);
  dropped.fc.assigned.pop_back();
  CHECK(check(dropped).has_rule("cover.invariant"));

  auto wrong = fixtures::z6_stabilizer();
  wrong.fc.assigned.assign(6, wrong.family->require_index("1"));
  CHECK(check(wrong).has_rule("fsubset.disjoint"));

  auto short_assign = fixtures::z6_bands();
  short_assign.fc.assigned.pop_back();
  CHECK_THROWS_WITH_AS(check(short_assign), doctest::Contains("InputInvalid"), Error);
}

TEST_CASE("amenable pipeline") {
  const auto f = fixtures::z6_bands();
  const auto L = lebesgue_number(*f.cover);
  REQUIRE_FALSE(L.infinite);
  const Rational eps = Rational(20) / L.value;
  const auto p = run_amenable_pipeline(f.gx, f.norms, *f.family, f.fc, eps, f.N, f.S);
  CHECK(p.verdict() == Verdict::Pass);
  CHECK(p.R == ExtendedRational::finite(L.value));
  CHECK(p.E->vertex_count() == 2);
  CHECK(p.E->dimension() == 1);
  for (const auto& s : p.stabilizers) CHECK(s == all_of(6));
  CHECK(p.fcover.verdict() == Verdict::Pass);

  CHECK_THROWS_WITH_AS(run_amenable_pipeline(f.gx, f.norms, *f.family, f.fc, eps / 2, f.N, f.S),
                       doctest::Contains("PreconditionFailed"), Error);
  CHECK_THROWS_WITH_AS(run_amenable_pipeline(f.gx, f.norms, *f.family, f.fc, Rational(0), f.N, f.S),
                       doctest::Contains("PreconditionFailed"), Error);
  CHECK_THROWS_WITH_AS(run_amenable_pipeline(f.gx, f.norms, *f.family, f.fc, Rational(-1), f.N, f.S),
                       doctest::Contains("InputInvalid"), Error);

  const auto z = fixtures::z_two_point();
  const auto q = run_amenable_pipeline(z.gx, z.norms, *z.family, z.fc, Rational(2), z.N, z.S);
  CHECK(q.verdict() == Verdict::Pass);
  CHECK(q.E->vertex_count() == 2);
  CHECK(q.E->dimension() == 0);
  for (const auto& s : q.stabilizers) CHECK(s == all_of(41));
  CHECK(q.fcover.verdict() == Verdict::Uncertified);
  CHECK(q.f.f[0] == NervePoint::vertex(0));
  CHECK(q.f.f[1] == NervePoint::vertex(1));
}

TEST_CASE("pipeline with the whole space as the only set") {
  auto c = coset_cover(6, 1);
  const auto p = run_amenable_pipeline(c.gx, c.norms, *c.family, c.fc, Rational(0), 0, {0, 1, 2});
  CHECK(p.R.infinite);
  CHECK(p.verdict() == Verdict::Pass);
  CHECK(p.E->vertex_count() == 1);
}

TEST_CASE("property: coset covers are amenable exactly when S sits in one coset") {
  std::mt19937 rng(23);
  const std::vector<std::size_t> divisors{1, 2, 3, 4, 6, 12};
  std::uniform_int_distribution<std::size_t> pick(0, divisors.size() - 1), elem(0, 11), count(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    const auto d = divisors[pick(rng)];
    const auto c = coset_cover(12, d);
    std::vector<std::size_t> S;
    std::set<std::size_t> classes;
    for (std::size_t k = count(rng); k > 0; --k) {
      const auto g = elem(rng);
      S.push_back(c.G->require_index(std::to_string(g)));
      classes.insert(g % d);
    }
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    const auto r = check_N_F_amenable(*c.gx, *c.family, c.fc, S, 0);
    CHECK((r.verdict() == Verdict::Pass) == (classes.size() == 1));
    CHECK(r.has_rule("cover.capture") == (classes.size() > 1));

    const Rational eps = d == 1 ? Rational(0) : Rational(6);
    const auto p = run_amenable_pipeline(c.gx, c.norms, *c.family, c.fc, eps, 0, S);
    CHECK(p.verdict() == Verdict::Pass);
    CHECK(p.E->vertex_count() == d);
    for (const auto& s : p.stabilizers) CHECK(s == c.family->members()[0].elements);
  }
}
