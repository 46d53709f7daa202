#include "coarsekit/group.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "coarsekit/error.hpp"

namespace coarsekit {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

std::string tuple_label(const std::vector<std::int64_t>& c) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
  out << ')';
  return out.str();
}

}  // namespace

GroupWindow::GroupWindow(std::vector<std::string> elements, std::size_t identity, std::vector<std::size_t> mult,
                         std::vector<std::size_t> inv, std::vector<Generator> gens)
    : labels_(std::move(elements)),
      identity_(identity),
      mult_(std::move(mult)),
      inv_(std::move(inv)),
      gens_(std::move(gens)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw Error(ErrorCode::InputInvalid, "group window must contain the identity");
  if (identity_ >= n) throw Error(ErrorCode::InputInvalid, "identity index out of range");
  if (mult_.size() != n * n) throw Error(ErrorCode::InputInvalid, "multiplication table must be n x n");
  if (inv_.size() != n) throw Error(ErrorCode::InputInvalid, "inversion table must have one entry per element");
  for (auto v : mult_) {
    if (v != kOutside && v >= n) throw Error(ErrorCode::InputInvalid, "multiplication entry out of range");
  }
  for (auto v : inv_) {
    if (v >= n) throw Error(ErrorCode::InputInvalid, "inversion table must be total on the window");
  }
  for (const auto& s : gens_) {
    if (s.element >= n) throw Error(ErrorCode::InputInvalid, "generator outside the window");
    if (s.weight <= 0) throw Error(ErrorCode::InputInvalid, "generator weights must be positive");
  }
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw Error(ErrorCode::InputInvalid, "duplicate group element '" + labels_[i] + "'");
    }
  }
}

std::optional<std::size_t> GroupWindow::index_of(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GroupWindow::require_index(std::string_view label) const {
  if (auto g = index_of(label)) return *g;
  throw Error(ErrorCode::InputInvalid, "unknown group element '" + std::string(label) + "'");
}

GroupWindow GroupWindow::with_product(std::size_t g, std::size_t h, std::size_t value) const {
  GroupWindow copy = *this;
  copy.mult_[g * size() + h] = value;
  return copy;
}

ValidationReport GroupWindow::validate() const {
  ValidationReport report;
  const std::size_t n = size();
  const std::size_t e = identity_;
  for (std::size_t g = 0; g < n; ++g) {
    const auto eg = multiply(e, g);
    const auto ge = multiply(g, e);
    if ((eg != kOutside && eg != g) || (ge != kOutside && ge != g)) {
      report.violation("identity", "e is not a two-sided identity", {label(g)});
    }
    if (inverse(inverse(g)) != g) report.violation("inverse.involution", "inv(inv(g)) != g", {label(g)});
    const auto gi = multiply(g, inverse(g));
    if (gi != kOutside && gi != e) report.violation("inverse.product", "g * inv(g) != e", {label(g)});
  }
  if (inverse(e) != e) report.violation("inverse.identity", "inv(e) != e", {label(e)});
  for (const auto& s : gens_) {
    const auto it = std::find_if(gens_.begin(), gens_.end(), [&](const Generator& t) {
      return t.element == inverse(s.element) && t.weight == s.weight;
    });
    if (it == gens_.end()) {
      report.violation("generators.symmetric", "inv(s) missing from S or W(inv(s)) != W(s)", {label(s.element)});
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      const auto gh = multiply(g, h);
      if (gh == kOutside) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const auto hk = multiply(h, k);
        if (hk == kOutside) continue;
        const auto left = multiply(gh, k);
        const auto right = multiply(g, hk);
        if (left != kOutside && right != kOutside && left != right) {
          report.violation("associativity", "(gh)k != g(hk)", {label(g), label(h), label(k)});
        }
      }
    }
  }
  return report;
}

GroupWindow make_group_window(std::vector<std::string> labels, std::size_t identity,
                              const std::function<std::optional<std::size_t>(std::size_t, std::size_t)>& product,
                              const std::function<std::size_t(std::size_t)>& inverse, std::vector<Generator> gens) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> mult(n * n, kOutside);
  std::vector<std::size_t> inv(n);
  for (std::size_t g = 0; g < n; ++g) {
    inv[g] = inverse(g);
    for (std::size_t h = 0; h < n; ++h) {
      if (auto p = product(g, h)) mult[g * n + h] = *p;
    }
  }
  return GroupWindow(std::move(labels), identity, std::move(mult), std::move(inv), std::move(gens));
}

std::vector<Generator> symmetrize(const GroupWindow& window, std::vector<Generator> gens) {
  std::vector<Generator> out;
  auto present = [&](std::size_t el, const Rational& w) {
    return std::any_of(out.begin(), out.end(), [&](const Generator& t) { return t.element == el && t.weight == w; });
  };
  for (const auto& s : gens) {
    if (!present(s.element, s.weight)) out.push_back(s);
    const auto si = window.inverse(s.element);
    if (!present(si, s.weight)) out.push_back({si, s.weight});
  }
  return out;
}

// ---------------------------------------------------------------------------

GroupWindow integer_lattice_window(std::size_t dim, std::int64_t radius, std::vector<Rational> weights) {
  if (dim == 0 || radius < 0) throw Error(ErrorCode::InputInvalid, "Z^d window needs d >= 1 and radius >= 0");
  if (weights.empty()) weights.assign(dim, Rational(1));
  if (weights.size() != dim) throw Error(ErrorCode::InputInvalid, "Z^d window needs one weight per coordinate");
  const std::int64_t side = 2 * radius + 1;
  std::size_t n = 1;
  for (std::size_t k = 0; k < dim; ++k) n *= static_cast<std::size_t>(side);

  auto encode = [&](const std::vector<std::int64_t>& c) -> std::optional<std::size_t> {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dim; ++k) {
      if (c[k] < -radius || c[k] > radius) return std::nullopt;
      idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(c[k] + radius);
    }
    return idx;
  };
  std::vector<std::vector<std::int64_t>> coords(n, std::vector<std::int64_t>(dim));
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rest = i;
    for (std::size_t k = dim; k-- > 0;) {
      coords[i][k] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(side)) - radius;
      rest /= static_cast<std::size_t>(side);
    }
    labels[i] = dim == 1 ? std::to_string(coords[i][0]) : tuple_label(coords[i]);
  }
  const std::size_t identity = *encode(std::vector<std::int64_t>(dim, 0));
  auto product = [&](std::size_t g, std::size_t h) {
    std::vector<std::int64_t> c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = coords[g][k] + coords[h][k];
    return encode(c);
  };
  auto inverse = [&](std::size_t g) {
    std::vector<std::int64_t> c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = -coords[g][k];
    return *encode(c);
  };
  std::vector<Generator> gens;
  if (radius > 0) {
    for (std::size_t k = 0; k < dim; ++k) {
      std::vector<std::int64_t> c(dim, 0);
      c[k] = 1;
      gens.push_back({*encode(c), weights[k]});
      c[k] = -1;
      gens.push_back({*encode(c), weights[k]});
    }
  }
  return make_group_window(std::move(labels), identity, product, inverse, std::move(gens));
}

GroupWindow integer_window_with_generators(std::int64_t radius,
                                           const std::vector<std::pair<std::int64_t, Rational>>& gens) {
  GroupWindow base = integer_lattice_window(1, radius);
  std::vector<Generator> list;
  for (const auto& [step, w] : gens) {
    const auto idx = base.index_of(std::to_string(step));
    if (!idx || step == 0) throw Error(ErrorCode::InputInvalid, "generator " + std::to_string(step) + " not usable in window");
    list.push_back({*idx, w});
  }
  list = symmetrize(base, std::move(list));
  std::vector<std::size_t> mult(base.size() * base.size());
  for (std::size_t g = 0; g < base.size(); ++g) {
    for (std::size_t h = 0; h < base.size(); ++h) mult[g * base.size() + h] = base.multiply(g, h);
  }
  std::vector<std::size_t> inv(base.size());
  for (std::size_t g = 0; g < base.size(); ++g) inv[g] = base.inverse(g);
  return GroupWindow(base.labels(), base.identity(), std::move(mult), std::move(inv), std::move(list));
}

GroupWindow free_group_ball(std::size_t rank, std::size_t radius) {
  if (rank == 0 || rank > 26) throw Error(ErrorCode::InputInvalid, "free group rank must be in 1..26");
  auto inverse_letter = [](char c) { return static_cast<char>(c >= 'a' ? c - 'a' + 'A' : c - 'A' + 'a'); };
  std::vector<char> letters;
  for (std::size_t i = 0; i < rank; ++i) {
    letters.push_back(static_cast<char>('a' + i));
    letters.push_back(static_cast<char>('A' + i));
  }
  std::vector<std::string> words{""};
  for (std::size_t len = 1; len <= radius; ++len) {
    const std::size_t before = words.size();
    for (std::size_t w = 0; w < before; ++w) {
      if (words[w].size() != len - 1) continue;
      for (char c : letters) {
        if (!words[w].empty() && words[w].back() == inverse_letter(c)) continue;
        words.push_back(words[w] + c);
      }
    }
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = i;
  auto reduce_concat = [&](const std::string& a, const std::string& b) {
    std::string out = a;
    for (char c : b) {
      if (!out.empty() && out.back() == inverse_letter(c)) {
        out.pop_back();
      } else {
        out.push_back(c);
      }
    }
    return out;
  };
  auto product = [&](std::size_t g, std::size_t h) -> std::optional<std::size_t> {
    const auto w = reduce_concat(words[g], words[h]);
    const auto it = index.find(w);
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  auto inverse = [&](std::size_t g) {
    std::string w(words[g].rbegin(), words[g].rend());
    for (auto& c : w) c = inverse_letter(c);
    return index.at(w);
  };
  std::vector<Generator> gens;
  if (radius > 0) {
    for (char c : letters) gens.push_back({index.at(std::string(1, c)), Rational(1)});
  }
  std::vector<std::string> labels = words;
  labels[0] = "e";
  return make_group_window(std::move(labels), 0, product, inverse, std::move(gens));
}

GroupWindow cyclic_group(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InputInvalid, "cyclic group order must be positive");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  auto product = [n](std::size_t g, std::size_t h) -> std::optional<std::size_t> { return (g + h) % n; };
  auto inverse = [n](std::size_t g) { return (n - g) % n; };
  std::vector<Generator> gens;
  if (n > 1) {
    gens.push_back({1, Rational(1)});
    if (n > 2) gens.push_back({n - 1, Rational(1)});
  }
  return make_group_window(std::move(labels), 0, product, inverse, std::move(gens));
}

GroupWindow dihedral_group(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InputInvalid, "dihedral group needs n >= 2");
  // Element index f*n + k stands for s^f r^k.
  std::vector<std::string> labels;
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t k = 0; k < n; ++k) labels.push_back((f ? "s" : "r") + std::to_string(k));
  }
  auto product = [n](std::size_t g, std::size_t h) -> std::optional<std::size_t> {
    const std::size_t f1 = g / n, k1 = g % n, f2 = h / n, k2 = h % n;
    const std::size_t k = ((f2 ? (n - k1) % n : k1) + k2) % n;
    return ((f1 + f2) % 2) * n + k;
  };
  auto inverse = [n](std::size_t g) { return g < n ? (n - g) % n : g; };
  std::vector<Generator> gens{{1, Rational(1)}, {n - 1, Rational(1)}, {n, Rational(1)}};
  if (n == 2) gens = {{1, Rational(1)}, {n, Rational(1)}};
  return make_group_window(std::move(labels), 0, product, inverse, std::move(gens));
}

GroupWindow heisenberg_window(std::int64_t radius, std::int64_t central_radius) {
  if (radius < 0 || central_radius < 0) throw Error(ErrorCode::InputInvalid, "Heisenberg window radii must be >= 0");
  // |c| <= C and |ab - c| <= C keeps the window closed under inversion.
  auto inside = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
    return a >= -radius && a <= radius && b >= -radius && b <= radius && c >= -central_radius &&
           c <= central_radius && a * b - c >= -central_radius && a * b - c <= central_radius;
  };
  struct Abc {
    std::int64_t a, b, c;
  };
  std::vector<Abc> coords;
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::size_t> index;
  std::vector<std::string> labels;
  for (std::int64_t a = -radius; a <= radius; ++a) {
    for (std::int64_t b = -radius; b <= radius; ++b) {
      for (std::int64_t c = -central_radius; c <= central_radius; ++c) {
        if (!inside(a, b, c)) continue;
        index[{a, b, c}] = coords.size();
        coords.push_back({a, b, c});
        labels.push_back(tuple_label({a, b, c}));
      }
    }
  }
  auto encode = [&](std::int64_t a, std::int64_t b, std::int64_t c) -> std::optional<std::size_t> {
    const auto it = index.find({a, b, c});
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  auto product = [&](std::size_t g, std::size_t h) {
    const auto& x = coords[g];
    const auto& y = coords[h];
    return encode(x.a + y.a, x.b + y.b, x.c + y.c + x.a * y.b);
  };
  auto inverse = [&](std::size_t g) {
    const auto& x = coords[g];
    return *encode(-x.a, -x.b, x.a * x.b - x.c);
  };
  std::vector<Generator> gens;
  if (radius > 0) {
    gens = {{*encode(1, 0, 0), Rational(1)},
            {*encode(-1, 0, 0), Rational(1)},
            {*encode(0, 1, 0), Rational(1)},
            {*encode(0, -1, 0), Rational(1)}};
  }
  return make_group_window(std::move(labels), *encode(0, 0, 0), product, inverse, std::move(gens));
}

// ---------------------------------------------------------------------------

WordMetricTable::WordMetricTable(GroupPtr window, Rational radius, std::vector<std::optional<Rational>> computed,
                                 std::vector<bool> certified)
    : window_(std::move(window)),
      radius_(std::move(radius)),
      computed_(std::move(computed)),
      certified_(std::move(certified)) {}

const Rational& WordMetricTable::norm(std::size_t g) const {
  if (!certified_[g]) {
    throw Error(ErrorCode::Uncertified, "norm of '" + window_->label(g) + "' is not certified at radius " +
                                            to_string(radius_));
  }
  return *computed_[g];
}

std::size_t WordMetricTable::certified_count() const {
  return static_cast<std::size_t>(std::count(certified_.begin(), certified_.end(), true));
}

namespace {

struct TickedGenerators {
  std::int64_t denominator = 1;
  std::vector<std::pair<std::size_t, std::int64_t>> edges;  // (element, weight ticks)
};

TickedGenerators tick_generators(const GroupWindow& window) {
  mpz_class l = 1;
  for (const auto& s : window.generators()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), s.weight.get_den_mpz_t());
  TickedGenerators out;
  out.denominator = to_int64(l);
  for (const auto& s : window.generators()) {
    out.edges.emplace_back(s.element, to_int64(Rational(s.weight * Rational(l)).get_num()));
  }
  return out;
}

std::vector<std::int64_t> dijkstra(const GroupWindow& window, const TickedGenerators& gens, std::size_t source) {
  std::vector<std::int64_t> dist(window.size(), kUnreached);
  using Item = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, g] = pq.top();
    pq.pop();
    if (d != dist[g]) continue;
    for (auto [s, w] : gens.edges) {
      const auto gs = window.multiply(g, s);
      if (gs == kOutside) continue;
      if (d + w < dist[gs]) {
        dist[gs] = d + w;
        pq.emplace(dist[gs], gs);
      }
    }
  }
  return dist;
}

}  // namespace

WordMetricTable word_norms(GroupPtr window, const Rational& radius) {
  if (!window) throw Error(ErrorCode::InputInvalid, "word_norms needs a window");
  const auto& G = *window;
  const auto gens = tick_generators(G);
  const auto dist = dijkstra(G, gens, G.identity());
  const Rational scaled = radius * Rational(mpz_class(static_cast<long>(gens.denominator)));
  const std::int64_t budget = floor_saturated(scaled);

  for (std::size_t g = 0; g < G.size(); ++g) {
    if (dist[g] == kUnreached) continue;
    for (auto [s, w] : gens.edges) {
      if (dist[g] + w <= budget && G.multiply(g, s) == kOutside) {
        throw Error(ErrorCode::WindowTooSmall, "edge " + G.label(g) + " * " + G.label(s) +
                                                   " leaves the window within radius " + to_string(radius));
      }
    }
  }
  std::vector<std::optional<Rational>> computed(G.size());
  std::vector<bool> certified(G.size(), false);
  for (std::size_t g = 0; g < G.size(); ++g) {
    if (dist[g] == kUnreached) continue;
    computed[g] = make_rational(dist[g], gens.denominator);
    certified[g] = dist[g] <= budget;
  }
  return WordMetricTable(std::move(window), radius, std::move(computed), std::move(certified));
}

Rational default_norm_radius(const GroupPtr& window) {
  const auto& G = *window;
  const auto gens = tick_generators(G);
  const auto dist = dijkstra(G, gens, G.identity());
  std::int64_t leave = kUnreached;
  for (std::size_t g = 0; g < G.size(); ++g) {
    if (dist[g] == kUnreached) continue;
    for (auto [s, w] : gens.edges) {
      if (G.multiply(g, s) == kOutside) leave = std::min(leave, dist[g] + w);
    }
  }
  std::int64_t best = 0;
  for (auto d : dist) {
    if (d != kUnreached && d < leave) best = std::max(best, d);
  }
  return make_rational(best, gens.denominator);
}

std::optional<Rational> try_word_distance(const WordMetricTable& table, std::size_t g, std::size_t h) {
  const auto& G = table.window();
  const auto q = G.multiply(G.inverse(g), h);
  if (q == kOutside || !table.certified(q)) return std::nullopt;
  return table.norm(q);
}

Rational word_distance(const WordMetricTable& table, std::size_t g, std::size_t h) {
  if (auto d = try_word_distance(table, g, h)) return *d;
  const auto& G = table.window();
  throw Error(ErrorCode::Uncertified, "d(" + G.label(g) + "," + G.label(h) + ") is not certified in the window");
}

ValidationReport check_left_invariance(const WordMetricTable& table) {
  const auto& G = table.window();
  const std::size_t n = G.size();
  // Pairwise distances as rationals, nullopt when uncertified.
  std::vector<std::optional<Rational>> d(n * n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) d[g * n + h] = try_word_distance(table, g, h);
  }
  ValidationReport report;
  std::size_t skipped = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t g = 0; g < n; ++g) {
      const auto ag = G.multiply(a, g);
      if (ag == kOutside) continue;
      for (std::size_t h = 0; h < n; ++h) {
        const auto ah = G.multiply(a, h);
        if (ah == kOutside) continue;
        const auto& before = d[g * n + h];
        const auto& after = d[ag * n + ah];
        if (!before || !after) {
          ++skipped;
          continue;
        }
        if (*before != *after) {
          report.violation("left_invariance", "d(ag,ah) != d(g,h)", {G.label(a), G.label(g), G.label(h)});
        }
      }
    }
  }
  if (skipped > 0) {
    report.warning("left_invariance.skipped", std::to_string(skipped) + " in-window triples had uncertified distances");
  }
  return report;
}

FiniteMetricSpace group_ball(const WordMetricTable& table, const Rational& R) {
  if (R <= 0) throw Error(ErrorCode::EmptyBall, "open ball of radius " + to_string(R) + " is empty");
  if (R > table.radius()) {
    throw Error(ErrorCode::Uncertified, "ball radius " + to_string(R) + " exceeds certified radius " +
                                            to_string(table.radius()));
  }
  const auto& G = table.window();
  std::vector<std::size_t> members;
  for (std::size_t g = 0; g < G.size(); ++g) {
    if (table.certified(g) && table.norm(g) < R) members.push_back(g);
  }
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> dist(members.size(), std::vector<Rational>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    labels.push_back(G.label(members[i]));
    for (std::size_t j = 0; j < members.size(); ++j) dist[i][j] = word_distance(table, members[i], members[j]);
  }
  return FiniteMetricSpace("B(e," + to_string(R) + ")", std::move(labels), dist);
}

FiniteMetricSpace window_path_metric(const GroupWindow& window, std::string id) {
  const auto gens = tick_generators(window);
  const std::size_t n = window.size();
  std::vector<std::int64_t> ticks(n * n);
  for (std::size_t g = 0; g < n; ++g) {
    const auto row = dijkstra(window, gens, g);
    for (std::size_t h = 0; h < n; ++h) {
      if (row[h] == kUnreached) {
        throw Error(ErrorCode::InputInvalid, "Cayley graph of the window is disconnected at '" + window.label(h) + "'");
      }
      ticks[g * n + h] = row[h];
    }
  }
  return FiniteMetricSpace::from_ticks(std::move(id), window.labels(), gens.denominator, std::move(ticks));
}

}  // namespace coarsekit
