#include <doctest.h>

#include <random>

#include "coarsekit/error.hpp"
#include "coarsekit/group.hpp"
#include "oracles.hpp"

using namespace coarsekit;

namespace {

GroupPtr share(GroupWindow g) { return std::make_shared<const GroupWindow>(std::move(g)); }

void check_against_oracle(const GroupPtr& G, const Rational& radius) {
  const auto table = word_norms(G, radius);
  const auto brute = oracle::word_norms(*G, radius);
  for (std::size_t g = 0; g < G->size(); ++g) {
    const auto it = brute.find(g);
    CHECK(table.certified(g) == (it != brute.end()));
    if (it != brute.end() && table.certified(g)) CHECK(table.norm(g) == it->second);
  }
  CHECK(check_left_invariance(table).ok());
}

}  // namespace

TEST_CASE("built-in windows satisfy the group axioms") {
  CHECK(cyclic_group(6).validate().ok());
  CHECK(dihedral_group(6).validate().ok());
  CHECK(dihedral_group(6).size() == 12);
  CHECK(integer_lattice_window(2, 3).validate().ok());
  CHECK(free_group_ball(2, 3).validate().ok());
  CHECK(heisenberg_window(2, 4).validate().ok());
}

TEST_CASE("word norms on Z with unit generators") {
  auto Z = share(integer_lattice_window(1, 10));
  const auto t = word_norms(Z, Rational(10));
  for (int n = -10; n <= 10; ++n) CHECK(t.norm(Z->require_index(std::to_string(n))) == std::abs(n));
}

TEST_CASE("word norms on Z with generators 1 and 3") {
  auto Z = share(integer_window_with_generators(12, {{1, Rational(1)}, {3, Rational(2)}}));
  const auto t = word_norms(Z, Rational(8));
  CHECK(t.norm(Z->require_index("6")) == 4);
  CHECK(t.norm(Z->require_index("-5")) == 4);
  check_against_oracle(Z, Rational(8));
}

TEST_CASE("free group norms are reduced word lengths") {
  auto F = share(free_group_ball(2, 5));
  const auto t = word_norms(F, Rational(5));
  for (std::size_t g = 0; g < F->size(); ++g) {
    const auto& w = F->label(g);
    const std::size_t len = w == "e" ? 0 : w.size();
    CHECK(t.norm(g) == static_cast<long>(len));
  }
  check_against_oracle(F, Rational(5));
}

TEST_CASE("oracle agreement on Z^2, Z/6 and D_6") {
  check_against_oracle(share(integer_lattice_window(2, 4)), Rational(4));
  check_against_oracle(share(cyclic_group(6)), Rational(3));
  check_against_oracle(share(dihedral_group(6)), Rational(4));
  check_against_oracle(share(integer_lattice_window(2, 4, {Rational(1), Rational(3, 2)})), Rational(4));
}

TEST_CASE("Z^d norms are l1 norms") {
  auto Z2 = share(integer_lattice_window(2, 5));
  const auto t = word_norms(Z2, Rational(5));
  for (std::size_t g = 0; g < Z2->size(); ++g) {
    if (!t.certified(g)) continue;
    const auto c = lattice_coordinates(Z2->label(g));
    CHECK(t.norm(g) == std::abs(c[0]) + std::abs(c[1]));
  }
}

TEST_CASE("radius larger than the window throws WindowTooSmall") {
  auto Z = share(integer_lattice_window(1, 5));
  CHECK_THROWS_WITH_AS(word_norms(Z, Rational(6)), doctest::Contains("WindowTooSmall"), Error);
  CHECK(default_norm_radius(Z) == 5);
}

TEST_CASE("norms beyond the radius are uncertified") {
  auto Z = share(integer_lattice_window(1, 10));
  const auto t = word_norms(Z, Rational(4));
  CHECK(t.certified(Z->require_index("4")));
  CHECK_FALSE(t.certified(Z->require_index("5")));
  CHECK_THROWS_AS(t.norm(Z->require_index("7")), Error);
  CHECK_FALSE(try_word_distance(t, Z->require_index("-3"), Z->require_index("3")).has_value());
  CHECK(word_distance(t, Z->require_index("-1"), Z->require_index("2")) == 3);
}

TEST_CASE("left invariance detects a corrupted table") {
  auto G = share(cyclic_group(6));
  CHECK(check_left_invariance(word_norms(G, Rational(3))).ok());
  // Swap one product entry: 1 * 1 = 3 instead of 2.
  auto broken = share(G->with_product(G->require_index("1"), G->require_index("1"), G->require_index("3")));
  CHECK_FALSE(check_left_invariance(word_norms(broken, Rational(3))).ok());
  CHECK_FALSE(broken->validate().ok());
}

TEST_CASE("group balls use strict inequality") {
  auto Z = share(integer_lattice_window(1, 10));
  const auto t = word_norms(Z, Rational(10));
  CHECK(group_ball(t, Rational(4)).size() == 7);
  CHECK(group_ball(t, Rational(1, 10)).size() == 1);
  CHECK_THROWS_WITH_AS(group_ball(t, Rational(0)), doctest::Contains("EmptyBall"), Error);
  CHECK_THROWS_WITH_AS(group_ball(t, Rational(12)), doctest::Contains("Uncertified"), Error);

  auto Z2 = share(integer_lattice_window(2, 5));
  CHECK(group_ball(word_norms(Z2, Rational(5)), Rational(3)).size() == 13);
}

TEST_CASE("property: symmetry and triangle inequality of norms") {
  std::mt19937 rng(5);
  const std::vector<GroupPtr> windows{share(free_group_ball(2, 4)), share(dihedral_group(7)),
                                      share(integer_lattice_window(2, 4, {Rational(2), Rational(1, 3)})),
                                      share(heisenberg_window(2, 4))};
  for (const auto& G : windows) {
    const auto t = word_norms(G, default_norm_radius(G));
    for (std::size_t g = 0; g < G->size(); ++g) {
      if (t.certified(g) && t.certified(G->inverse(g))) CHECK(t.norm(g) == t.norm(G->inverse(g)));
    }
    std::uniform_int_distribution<std::size_t> pick(0, G->size() - 1);
    for (int k = 0; k < 500; ++k) {
      const auto g = pick(rng), h = pick(rng);
      const auto gh = G->multiply(g, h);
      if (gh == kOutside || !t.certified(g) || !t.certified(h) || !t.certified(gh)) continue;
      CHECK(t.norm(gh) <= t.norm(g) + t.norm(h));
    }
  }
}

TEST_CASE("property: norm sublevel sets match the oracle frontier") {
  auto G = share(free_group_ball(2, 4));
  const Rational radius(4);
  const auto t = word_norms(G, radius);
  const auto brute = oracle::word_norms(*G, radius);
  for (int B = 0; B <= 4; ++B) {
    std::size_t mine = 0, theirs = 0;
    for (std::size_t g = 0; g < G->size(); ++g) mine += t.certified(g) && t.norm(g) <= B;
    for (const auto& [g, w] : brute) theirs += w <= B;
    CHECK(mine == theirs);
  }
}

TEST_CASE("window path metric and symmetrize") {
  auto Z = share(integer_lattice_window(1, 3));
  const auto d = window_path_metric(*Z);
  CHECK(d.distance(Z->require_index("-3"), Z->require_index("3")) == 6);
  const auto gens = symmetrize(*Z, {{Z->require_index("2"), Rational(5)}});
  CHECK(gens.size() == 2);
}
