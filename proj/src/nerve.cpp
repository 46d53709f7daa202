#include "coarsekit/nerve.hpp"

#include <algorithm>
#include <set>

#include "coarsekit/error.hpp"
#include "coarsekit/parallel.hpp"

namespace coarsekit {

namespace {

bool includes_sorted(const std::vector<std::size_t>& big, const std::vector<std::size_t>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

void keep_max(std::optional<Rational>& best, const Rational& value) {
  if (!best || value > *best) best = value;
}

}  // namespace

UniformComplex::UniformComplex(std::vector<std::string> vertices, std::vector<std::vector<std::size_t>> simplices)
    : labels_(std::move(vertices)) {
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    if (!index_.emplace(labels_[v], v).second) {
      throw Error(ErrorCode::InputInvalid, "duplicate vertex '" + labels_[v] + "'");
    }
  }
  std::vector<char> covered(labels_.size(), 0);
  for (auto& s : simplices) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) throw Error(ErrorCode::InputInvalid, "simplices must be nonempty");
    if (s.back() >= labels_.size()) throw Error(ErrorCode::InputInvalid, "simplex uses an unknown vertex");
    for (auto v : s) covered[v] = 1;
  }
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    if (!covered[v]) simplices.push_back({v});
  }
  // Largest first, so a simplex is dropped when an earlier one contains it.
  std::sort(simplices.begin(), simplices.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  for (const auto& s : simplices) {
    const bool contained = std::any_of(facets_.begin(), facets_.end(), [&](const auto& f) { return includes_sorted(f, s); });
    if (!contained) facets_.push_back(s);
  }
  std::sort(facets_.begin(), facets_.end());
}

std::optional<std::size_t> UniformComplex::index_of(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t UniformComplex::require_index(std::string_view label) const {
  if (auto v = index_of(label)) return *v;
  throw Error(ErrorCode::InputInvalid, "unknown vertex '" + std::string(label) + "'");
}

bool UniformComplex::is_simplex(const std::vector<std::size_t>& sorted) const {
  if (sorted.empty()) return false;
  return std::any_of(facets_.begin(), facets_.end(), [&](const auto& f) { return includes_sorted(f, sorted); });
}

std::size_t UniformComplex::dimension() const {
  std::size_t best = 0;
  for (const auto& f : facets_) best = std::max(best, f.size());
  return best == 0 ? 0 : best - 1;
}

std::vector<std::vector<std::size_t>> UniformComplex::simplices() const {
  std::set<std::vector<std::size_t>> all;
  for (const auto& f : facets_) {
    if (f.size() > 24) throw Error(ErrorCode::InputInvalid, "facet too large to enumerate");
    for (std::uint32_t mask = 1; mask < (1u << f.size()); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (mask & (1u << i)) s.push_back(f[i]);
      }
      all.insert(std::move(s));
    }
  }
  std::vector<std::vector<std::size_t>> out(all.begin(), all.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

NervePoint NervePoint::vertex(std::size_t v) {
  NervePoint p;
  p.coords[v] = 1;
  return p;
}

Rational NervePoint::coordinate(std::size_t v) const {
  const auto it = coords.find(v);
  return it == coords.end() ? Rational(0) : it->second;
}

std::vector<std::size_t> NervePoint::support() const {
  std::vector<std::size_t> out;
  for (const auto& [v, c] : coords) {
    if (c != 0) out.push_back(v);
  }
  return out;
}

ValidationReport validate_point(const UniformComplex& K, const NervePoint& p) {
  ValidationReport report;
  Rational sum = 0;
  for (const auto& [v, c] : p.coords) {
    if (v >= K.vertex_count()) {
      report.violation("point.vertex", "coordinate on an unknown vertex");
      return report;
    }
    if (c < 0) report.violation("point.nonnegative", "negative coordinate", {K.label(v), to_string(c)});
    sum += c;
  }
  if (sum != 1) report.violation("point.sum", "coordinates sum to " + to_string(sum));
  if (!K.is_simplex(p.support())) report.violation("point.support", "support is not a simplex");
  return report;
}

Rational l1_distance(const NervePoint& p, const NervePoint& q) {
  Rational total = 0;
  auto a = p.coords.begin();
  auto b = q.coords.begin();
  while (a != p.coords.end() || b != q.coords.end()) {
    if (b == q.coords.end() || (a != p.coords.end() && a->first < b->first)) {
      total += abs(a->second);
      ++a;
    } else if (a == p.coords.end() || b->first < a->first) {
      total += abs(b->second);
      ++b;
    } else {
      total += abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return total;
}

UniformComplex nerve_of_cover(const Cover& cover) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    labels.push_back(cover.sets()[i].name.empty() ? "U" + std::to_string(i) : cover.sets()[i].name);
  }
  std::set<std::vector<std::size_t>> distinct;
  for (const auto& m : cover.membership()) {
    if (!m.empty()) distinct.insert(m);
  }
  return UniformComplex(std::move(labels), {distinct.begin(), distinct.end()});
}

// ---------------------------------------------------------------------------

SimplicialAction::SimplicialAction(ComplexPtr complex, GroupPtr group, std::vector<std::size_t> table)
    : complex_(std::move(complex)), group_(std::move(group)), table_(std::move(table)) {
  if (!complex_ || !group_) throw Error(ErrorCode::InputInvalid, "simplicial action needs a complex and a group");
  if (table_.size() != group_->size() * complex_->vertex_count()) {
    throw Error(ErrorCode::InputInvalid, "vertex action table must have |G| * |V| entries");
  }
  for (auto v : table_) {
    if (v != kOutside && v >= complex_->vertex_count()) throw Error(ErrorCode::InputInvalid, "vertex action entry out of range");
  }
}

std::optional<NervePoint> SimplicialAction::act(std::size_t g, const NervePoint& p) const {
  NervePoint out;
  for (const auto& [v, c] : p.coords) {
    const auto w = act_vertex(g, v);
    if (w == kOutside) return std::nullopt;
    out.coords[w] += c;
  }
  return out;
}

std::vector<std::size_t> SimplicialAction::stabilizer(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < group_->size(); ++g) {
    if (act_vertex(g, v) == v) out.push_back(g);
  }
  return out;
}

ValidationReport SimplicialAction::validate() const {
  ValidationReport report;
  const auto& G = *group_;
  const auto& K = *complex_;
  for (std::size_t v = 0; v < K.vertex_count(); ++v) {
    if (act_vertex(G.identity(), v) != v) report.violation("simplicial.identity", "e.v != v", {K.label(v)});
  }
  for (std::size_t g = 0; g < G.size(); ++g) {
    std::vector<std::size_t> hit(K.vertex_count(), kOutside);
    for (std::size_t v = 0; v < K.vertex_count(); ++v) {
      const auto w = act_vertex(g, v);
      if (w == kOutside) continue;
      if (hit[w] != kOutside) {
        report.violation("simplicial.injective", "two vertices share an image", {G.label(g), K.label(hit[w]), K.label(v)});
      }
      hit[w] = v;
    }
    for (const auto& f : K.facets()) {
      std::vector<std::size_t> image;
      bool defined = true;
      for (auto v : f) {
        const auto w = act_vertex(g, v);
        if (w == kOutside) {
          defined = false;
          break;
        }
        image.push_back(w);
      }
      if (!defined) continue;
      std::sort(image.begin(), image.end());
      image.erase(std::unique(image.begin(), image.end()), image.end());
      if (!K.is_simplex(image)) report.violation("simplicial.map", "g maps a simplex to a non-simplex", {G.label(g)});
    }
    for (std::size_t h = 0; h < G.size(); ++h) {
      const auto gh = G.multiply(g, h);
      if (gh == kOutside) continue;
      for (std::size_t v = 0; v < K.vertex_count(); ++v) {
        const auto hv = act_vertex(h, v);
        if (hv == kOutside) continue;
        const auto left = act_vertex(gh, v);
        const auto right = act_vertex(g, hv);
        if (left != kOutside && right != kOutside && left != right) {
          report.violation("simplicial.compatible", "(gh).v != g.(h.v)", {G.label(g), G.label(h), K.label(v)});
        }
      }
    }
  }
  return report;
}

SimplicialAction induced_cover_action(const Cover& cover, const ProductWindow& gx, ComplexPtr nerve) {
  if (cover.space().size() != gx.size()) throw Error(ErrorCode::InputInvalid, "cover does not live on G x X");
  const auto& G = gx.group();
  const std::size_t k = cover.size();
  std::vector<std::size_t> table(G.size() * k, kOutside);
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t u = 0; u < k; ++u) {
      std::size_t match = kOutside;
      bool unique = true;
      for (std::size_t v = 0; v < k && unique; ++v) {
        bool same = true;
        for (std::size_t y = 0; y < gx.size() && same; ++y) {
          const auto gy = gx.act(g, y);
          if (gy == kOutside) continue;
          same = cover.contains(u, y) == cover.contains(v, gy);
        }
        if (!same) continue;
        if (match == kOutside) {
          match = v;
        } else {
          unique = false;
        }
      }
      if (unique) table[g * k + u] = match;
    }
  }
  return SimplicialAction(std::move(nerve), gx.action().group_ptr(), std::move(table));
}

std::optional<std::size_t> first_unfat_point(const Cover& cover, const Rational& R) {
  const auto thr = cover.space().threshold(R);
  for (std::size_t y = 0; y < cover.space().size(); ++y) {
    bool fat = false;
    for (auto u : cover.membership()[y]) {
      const auto cd = codistance_ticks(cover, u, y);
      if (!cd || thr.at_least(*cd)) {
        fat = true;
        break;
      }
    }
    if (!fat) return y;
  }
  return std::nullopt;
}

NervePoint psi_map(const Cover& cover, std::size_t y) {
  const auto& sets = cover.membership()[y];
  if (sets.empty()) {
    throw Error(ErrorCode::ZeroDenominator, "no cover set contains '" + cover.space().label(y) + "'");
  }
  std::vector<std::size_t> whole;
  std::vector<std::pair<std::size_t, std::int64_t>> finite;
  std::int64_t sum = 0;
  for (auto u : sets) {
    const auto cd = codistance_ticks(cover, u, y);
    if (!cd) {
      whole.push_back(u);
    } else {
      finite.emplace_back(u, *cd);
      sum += *cd;
    }
  }
  NervePoint p;
  if (!whole.empty()) {
    for (auto u : whole) p.coords[u] = Rational(1, static_cast<unsigned long>(whole.size()));
    return p;
  }
  if (sum == 0) throw Error(ErrorCode::ZeroDenominator, "co-distances vanish at '" + cover.space().label(y) + "'");
  for (auto [u, cd] : finite) {
    Rational c = make_rational(cd, sum);
    if (c != 0) p.coords[u] = c;
  }
  return p;
}

std::vector<NervePoint> psi_all(const Cover& cover, unsigned jobs) {
  std::vector<NervePoint> out(cover.space().size());
  std::size_t chunks = 0;
  for_each_chunk(out.size(), jobs, chunks, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t y = begin; y < end; ++y) out[y] = psi_map(cover, y);
  });
  return out;
}

ValidationReport check_psi_equivariance(const Cover& cover, const ProductWindow& gx, const SimplicialAction& action) {
  ValidationReport report;
  const auto psi = psi_all(cover);
  const auto& G = gx.group();
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t y = 0; y < gx.size(); ++y) {
      const auto gy = gx.act(g, y);
      if (gy == kOutside) continue;
      const auto moved = action.act(g, psi[y]);
      if (!moved) {
        report.uncertified("psi.equivariance", "g.psi(y) leaves the window", {G.label(g), gx.label(y)});
        continue;
      }
      if (!(*moved == psi[gy])) {
        report.violation("psi.equivariance", "psi(g.y) != g.psi(y)", {G.label(g), gx.label(y)});
      }
    }
  }
  return report;
}

PsiLipschitzReport verify_psi_lipschitz(const Cover& cover, const ProductWindow& gx, const WordMetricTable& norms,
                                        std::size_t N, const Rational& R, unsigned jobs) {
  if (cover.space().size() != gx.size()) throw Error(ErrorCode::InputInvalid, "cover does not live on G x X");
  if (R <= 0) throw Error(ErrorCode::PreconditionFailed, "fatness radius R must be positive");
  const auto mult = multiplicity(cover);
  if (mult > N + 1) {
    throw Error(ErrorCode::PreconditionFailed,
                "cover multiplicity " + std::to_string(mult) + " exceeds N+1 = " + std::to_string(N + 1));
  }
  if (auto y = first_unfat_point(cover, R)) {
    throw Error(ErrorCode::PreconditionFailed,
                "point '" + cover.space().label(*y) + "' has no set U with B(y;" + to_string(R) + ") inside U");
  }
  const auto& d = cover.space();
  const auto psi = psi_all(cover, jobs);
  const Rational n(static_cast<long>(N));
  PsiLipschitzReport out;
  out.bound = 2 * (n + 1) * (2 * n + 3) / R;
  out.coordinate_bound = (2 * n + 3) / R;
  const auto& G = gx.group();
  const std::size_t nx = gx.action().point_count();
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t h = g + 1; h < G.size(); ++h) {
      const auto dw = try_word_distance(norms, g, h);
      if (!dw) {
        ++out.skipped;
        continue;
      }
      for (std::size_t x = 0; x < nx; ++x) {
        const auto a = gx.index(g, x);
        const auto b = gx.index(h, x);
        const auto d1 = l1_distance(psi[a], psi[b]);
        ++out.pairs;
        keep_max(out.sharpest, d1 / *dw);
        if (d1 > out.bound * *dw) {
          out.report.violation("psi.lipschitz", "d1 = " + to_string(d1) + " exceeds bound * d_G", {gx.label(a), gx.label(b)});
        }
      }
    }
  }
  for (std::size_t a = 0; a < gx.size(); ++a) {
    for (std::size_t b = a + 1; b < gx.size(); ++b) {
      const auto dab = d.distance(a, b);
      std::set<std::size_t> keys;
      for (const auto& [u, c] : psi[a].coords) keys.insert(u);
      for (const auto& [u, c] : psi[b].coords) keys.insert(u);
      for (auto u : keys) {
        const Rational diff = abs(psi[a].coordinate(u) - psi[b].coordinate(u));
        keep_max(out.sharpest_coordinate, diff / dab);
        if (diff > out.coordinate_bound * dab) {
          out.report.violation("psi.coordinate", "coordinate jump exceeds (2N+3)/R * d",
                               {gx.label(a), gx.label(b), cover.sets()[u].name});
        }
      }
    }
  }
  if (out.skipped > 0) {
    out.report.warning("psi.lipschitz.skipped", std::to_string(out.skipped) + " group pairs had uncertified d_G");
  }
  return out;
}

// ---------------------------------------------------------------------------

EquivarianceReport check_equivariance_up_to(const EquivariantMapWindow& f) {
  EquivarianceReport out;
  const auto& A = *f.domain;
  const auto& T = *f.target;
  const auto& G = A.group();
  const auto& norms = *f.norms;
  auto check = [&](std::size_t g, const Rational& weight, ValidationReport& report, bool track) {
    for (std::size_t x = 0; x < A.point_count(); ++x) {
      const auto gx = A.act(g, x);
      const auto gfx = T.act(g, f.f[x]);
      if (gx == kOutside || !gfx) {
        report.uncertified("equivariance.window", "g.x or g.f(x) leaves the window", {G.label(g), A.point(x)});
        continue;
      }
      const auto d = l1_distance(f.f[gx], *gfx);
      if (track && weight > 0) keep_max(out.sharpest, d / weight);
      if (d > f.epsilon * weight) {
        report.violation("equivariance", "d1(f(gx), g f(x)) = " + to_string(d) + " exceeds " + to_string(f.epsilon * weight),
                         {G.label(g), A.point(x)});
      }
    }
  };
  for (std::size_t g = 0; g < G.size(); ++g) {
    if (!norms.certified(g)) {
      out.global.uncertified("equivariance.norm", "||g|| is not certified", {G.label(g)});
      continue;
    }
    check(g, norms.norm(g), out.global, true);
  }
  for (const auto& s : G.generators()) check(s.element, s.weight, out.generators, false);
  return out;
}

PhiTable phi_map(const EquivariantMapWindow& f, std::size_t x) {
  const auto& A = *f.domain;
  const auto& T = *f.target;
  const auto& G = A.group();
  PhiTable out;
  out.x = x;
  out.values.reserve(G.size());
  for (std::size_t g = 0; g < G.size(); ++g) {
    const auto y = A.act(G.inverse(g), x);
    if (y == kOutside) throw Error(ErrorCode::Uncertified, "g^-1 x leaves the window for g = " + G.label(g));
    auto p = T.act(g, f.f[y]);
    if (!p) throw Error(ErrorCode::Uncertified, "g f(g^-1 x) leaves the window for g = " + G.label(g));
    out.values.push_back(std::move(*p));
  }
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t h = g + 1; h < G.size(); ++h) {
      const auto dw = try_word_distance(*f.norms, g, h);
      if (!dw) {
        ++out.skipped;
        continue;
      }
      const auto d1 = l1_distance(out.values[g], out.values[h]);
      keep_max(out.sharpest, d1 / *dw);
      if (d1 > f.epsilon * *dw) {
        out.report.violation("phi.lipschitz", "d1(phi(g), phi(h)) exceeds eps * d_W(g,h)", {G.label(g), G.label(h)});
      }
    }
  }
  if (out.skipped > 0) {
    out.report.warning("phi.lipschitz.skipped", std::to_string(out.skipped) + " pairs had uncertified d_W");
  }
  return out;
}

std::vector<std::size_t> star_pullback(const PhiTable& phi, std::size_t v) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < phi.values.size(); ++g) {
    if (phi.values[g].coordinate(v) != 0) out.push_back(g);
  }
  return out;
}

PullbackCertificate check_star_pullback(const EquivariantMapWindow& f, const PhiTable& phi, std::size_t v) {
  const auto& T = *f.target;
  const auto& G = T.group();
  const auto& norms = *f.norms;
  PullbackCertificate out;
  out.pullback = star_pullback(phi, v);
  std::set<std::size_t> image;
  for (const auto& p : f.f) {
    for (auto w : p.support()) image.insert(w);
  }
  auto less = [&](std::size_t a, std::size_t b) {
    const auto& na = norms.computed(a);
    const auto& nb = norms.computed(b);
    if (na.has_value() != nb.has_value()) return na.has_value();
    if (na && *na != *nb) return *na < *nb;
    return G.label(a) < G.label(b);
  };
  for (auto vi : image) {
    std::optional<std::size_t> best;
    for (std::size_t g = 0; g < G.size(); ++g) {
      if (T.act_vertex(g, vi) != v) continue;
      if (!best || less(g, *best)) best = g;
    }
    if (best) out.representatives.emplace_back(vi, *best);
  }
  for (auto g : out.pullback) {
    bool contained = false;
    bool unresolved = false;
    for (const auto& [vi, rep] : out.representatives) {
      const auto q = G.multiply(G.inverse(rep), g);
      if (q == kOutside) {
        unresolved = true;
        continue;
      }
      if (T.act_vertex(q, vi) == vi) {
        contained = true;
        break;
      }
    }
    if (contained) continue;
    if (unresolved) {
      out.report.uncertified("pullback.containment", "coset membership leaves the window", {G.label(g)});
    } else {
      out.report.violation("pullback.containment", "pullback element outside every coset g_{v,i} Stab(v_i)",
                           {G.label(g), T.complex().label(v)});
    }
  }
  return out;
}

}  // namespace coarsekit
