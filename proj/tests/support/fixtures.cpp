#include "fixtures.hpp"

#include <map>
#include <numeric>

namespace fixtures {

namespace {

std::size_t mod(std::int64_t a, std::int64_t n) { return static_cast<std::size_t>(((a % n) + n) % n); }

FiniteMetricSpace cycle_metric(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  const auto m = static_cast<std::int64_t>(n);
  return FiniteMetricSpace::from_function("C" + std::to_string(n), labels, 1, [m](std::size_t a, std::size_t b) {
    const auto d = static_cast<std::int64_t>(mod(static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b), m));
    return std::min(d, m - d);
  });
}

GXFixture assemble(std::string name, ActionPtr action, const FiniteMetricSpace& dX, const Rational& lambda,
                   const std::function<std::vector<CoverSet>(const ProductWindow&)>& sets,
                   std::vector<SubgroupFamilyWindow::Member> family, std::vector<std::string> assigned,
                   std::vector<std::size_t> S, std::size_t N) {
  GXFixture f;
  f.name = std::move(name);
  const auto& G = action->group_ptr();
  f.gx = std::make_shared<const ProductWindow>(action);
  f.norms = std::make_shared<const WordMetricTable>(word_norms(G, default_norm_radius(G)));
  const auto dG = window_path_metric(*G);
  f.metric = std::make_shared<const FiniteMetricSpace>(product_sum_metric(*f.gx, dG, dX, lambda));
  f.cover = std::make_shared<const Cover>(f.metric, sets(*f.gx));
  f.family = std::make_shared<const SubgroupFamilyWindow>(G, std::move(family));
  f.fc.cover = f.cover;
  for (const auto& a : assigned) f.fc.assigned.push_back(f.family->require_index(a));
  f.S = std::move(S);
  f.N = N;
  return f;
}

std::vector<std::size_t> all_of(const GroupWindow& G) {
  std::vector<std::size_t> out(G.size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<CoverSet> bands(const ProductWindow& gx) {
  // t = x - g mod 6 is invariant under the diagonal action.
  CoverSet a{"A", {}}, b{"B", {}};
  for (std::size_t y = 0; y < gx.size(); ++y) {
    const auto g = std::stoll(gx.group().label(gx.group_part(y)));
    const auto x = static_cast<std::int64_t>(gx.space_part(y));
    const auto t = mod(x - g, 6);
    if (t <= 3) a.members.push_back(y);
    if (t >= 3 || t == 0) b.members.push_back(y);
  }
  return {a, b};
}

}  // namespace

GXFixture z6_bands(const Rational& lambda) {
  auto G = std::make_shared<const GroupWindow>(cyclic_group(6));
  auto action = std::make_shared<const ActionWindow>(regular_action(G));
  return assemble("z6-bands", action, cycle_metric(6), lambda, bands,
                  {{"1", {G->identity()}}, {"C2", {G->require_index("0"), G->require_index("3")}}, {"G", all_of(*G)}},
                  {"G", "G"}, {G->require_index("0"), G->require_index("1")}, 1);
}

GXFixture z6_stabilizer(const Rational& lambda) {
  auto G = std::make_shared<const GroupWindow>(cyclic_group(6));
  auto action = std::make_shared<const ActionWindow>(regular_action(G));
  auto sets = [](const ProductWindow& gx) {
    std::vector<CoverSet> out;
    for (int j = 0; j < 3; ++j) out.push_back({"U" + std::to_string(j), {}});
    for (int j = 0; j < 3; ++j) out.push_back({"W" + std::to_string(j), {}});
    for (std::size_t y = 0; y < gx.size(); ++y) {
      out[std::stoul(gx.group().label(gx.group_part(y))) % 3].members.push_back(y);
      out[3 + gx.space_part(y) % 3].members.push_back(y);
    }
    return out;
  };
  return assemble("z6-stabilizer", action, cycle_metric(6), lambda, sets,
                  {{"1", {G->identity()}}, {"C2", {G->require_index("0"), G->require_index("3")}}, {"G", all_of(*G)}},
                  {"C2", "C2", "C2", "C2", "C2", "C2"}, all_of(*G), 1);
}

GXFixture z_two_point(std::int64_t radius, const Rational& c) {
  auto G = std::make_shared<const GroupWindow>(integer_lattice_window(1, radius));
  auto action = std::make_shared<const ActionWindow>(trivial_action(G, {"+", "-"}));
  const FiniteMetricSpace dX("pm", {"+", "-"}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
  auto sets = [](const ProductWindow& gx) {
    CoverSet plus{"P", {}}, minus{"M", {}};
    for (std::size_t y = 0; y < gx.size(); ++y) (gx.space_part(y) == 0 ? plus : minus).members.push_back(y);
    return std::vector<CoverSet>{plus, minus};
  };
  return assemble("z-two-point", action, dX, c, sets, {{"Z", all_of(*G)}}, {"Z", "Z"}, all_of(*G), 0);
}

GXFixture z_rotation(std::int64_t radius, const Rational& lambda) {
  auto G = std::make_shared<const GroupWindow>(integer_lattice_window(1, radius));
  auto action = std::make_shared<const ActionWindow>(rotation_action(G, 6));
  return assemble("z-rotation", action, cycle_metric(6), lambda, bands, {{"Z", all_of(*G)}}, {"Z", "Z"},
                  {G->require_index("0"), G->require_index("1")}, 1);
}

std::vector<GXFixture> gx_fixtures() {
  return {z6_bands(), z6_bands(Rational(1, 2)), z6_stabilizer(), z_two_point(), z_rotation()};
}

ComplexPtr hexagon(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("v" + std::to_string(i));
    edges.push_back({i, (i + 1) % n});
  }
  return std::make_shared<const UniformComplex>(labels, edges);
}

SimplicialActionPtr rotation_on(ComplexPtr K, GroupPtr G) {
  const auto n = K->vertex_count();
  std::vector<std::size_t> table(G->size() * n);
  for (std::size_t g = 0; g < G->size(); ++g) {
    const auto shift = std::stoll(G->label(g));
    for (std::size_t v = 0; v < n; ++v) table[g * n + v] = mod(static_cast<std::int64_t>(v) + shift, static_cast<std::int64_t>(n));
  }
  return std::make_shared<const SimplicialAction>(std::move(K), std::move(G), std::move(table));
}

namespace {

EquivariantMapWindow vertex_map(ActionPtr domain) {
  EquivariantMapWindow f;
  const auto& G = domain->group_ptr();
  f.domain = domain;
  f.target = rotation_on(hexagon(), G);
  for (std::size_t x = 0; x < domain->point_count(); ++x) f.f.push_back(NervePoint::vertex(x));
  f.epsilon = 0;
  f.norms = std::make_shared<const WordMetricTable>(word_norms(G, default_norm_radius(G)));
  return f;
}

}  // namespace

EquivariantMapWindow z6_hexagon_map() {
  auto G = std::make_shared<const GroupWindow>(cyclic_group(6));
  return vertex_map(std::make_shared<const ActionWindow>(regular_action(G)));
}

EquivariantMapWindow z_hexagon_map(std::int64_t radius) {
  auto G = std::make_shared<const GroupWindow>(integer_lattice_window(1, radius));
  return vertex_map(std::make_shared<const ActionWindow>(rotation_action(G, 6)));
}

DecompositionCertificate zline_certificate(const Rational& r) {
  DecompositionCertificate cert;
  auto X = std::make_shared<const FiniteMetricSpace>(integer_interval(0, 30));
  cert.family = {X};
  cert.r = r;
  cert.n = 1;
  cert.witness = BoundedWitness{Rational(5)};
  auto block = [&](std::string name, std::size_t color, int lo, int hi) {
    Piece p{std::move(name), 0, color, {}};
    for (int i = lo; i <= hi; ++i) p.members.push_back(X->require_index(std::to_string(i)));
    cert.pieces.push_back(std::move(p));
  };
  block("a0", 0, 0, 4);
  block("a1", 0, 10, 14);
  block("a2", 0, 20, 24);
  block("b0", 1, 5, 9);
  block("b1", 1, 15, 19);
  block("b2", 1, 25, 30);
  return cert;
}

DecompositionCertificate zline_boost_certificate() {
  auto cert = zline_certificate(Rational(9));
  const auto& X = *cert.family[0];
  auto block = [&](std::string name, std::size_t color, int lo, int hi) {
    Piece p{std::move(name), 0, color, {}};
    for (int i = lo; i <= hi; ++i) p.members.push_back(X.require_index(std::to_string(i)));
    return p;
  };
  cert.pieces = {block("a0", 0, 0, 5), block("a1", 0, 15, 23), block("b0", 1, 6, 14), block("b1", 1, 24, 30)};
  cert.witness = BoundedWitness{Rational(8)};
  return cert;
}

DecompositionCertificate z2_strips(std::int64_t side, std::int64_t height, const Rational& r) {
  auto X = std::make_shared<const FiniteMetricSpace>(lattice_box({0, 0}, {side, side}));
  DecompositionCertificate cert;
  cert.family = {X};
  cert.r = r;
  cert.n = 1;
  const auto strips = side / height + 1;
  for (std::int64_t k = 0; k < strips; ++k) {
    cert.pieces.push_back({"s" + std::to_string(k), 0, static_cast<std::size_t>(k % 2), {}});
  }
  for (std::size_t y = 0; y < X->size(); ++y) {
    const auto c = lattice_coordinates(X->label(y));
    cert.pieces[static_cast<std::size_t>(c[1] / height)].members.push_back(y);
  }
  cert.witness = BoundedWitness{Rational(static_cast<long>(side + std::min(side + 1, height) - 1))};
  return cert;
}

std::vector<std::vector<Piece>> column_covers(const DecompositionCertificate& cert, std::size_t colors) {
  std::vector<std::vector<Piece>> out;
  for (const auto& piece : cert.pieces) {
    const auto& X = *cert.family[piece.space];
    std::vector<Piece> sets;
    for (std::size_t l = 0; l < colors; ++l) {
      std::map<std::int64_t, Piece> blocks;
      for (auto y : piece.members) {
        const auto c = lattice_coordinates(X.label(y));
        const auto shifted = c[0] - 5 * static_cast<std::int64_t>(l) + 15;
        if (shifted % 15 >= 12) continue;
        auto& b = blocks[shifted / 15];
        b.name = std::to_string(l) + "." + std::to_string(shifted / 15);
        b.space = piece.space;
        b.color = l;
        b.members.push_back(y);
      }
      for (auto& [q, b] : blocks) sets.push_back(std::move(b));
    }
    out.push_back(std::move(sets));
  }
  return out;
}

}  // namespace fixtures
