#include "coarsekit/decomposition.hpp"

#include <algorithm>
#include <limits>

#include "coarsekit/error.hpp"
#include "coarsekit/parallel.hpp"

namespace coarsekit {

namespace {

constexpr std::size_t kNoStamp = static_cast<std::size_t>(-1);

std::string piece_tag(const Piece& p, std::size_t index) {
  return p.name.empty() ? "#" + std::to_string(index) : p.name;
}

bool sorted_subset(const std::vector<std::size_t>& small, const std::vector<std::size_t>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<std::size_t> normalize_members(std::vector<std::size_t> m, std::size_t n, const std::string& what) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  if (m.empty()) throw Error(ErrorCode::InputInvalid, what + " is empty");
  if (m.back() >= n) throw Error(ErrorCode::InputInvalid, what + " has a point outside the space");
  return m;
}

}  // namespace

Cover::Cover(SpacePtr space, std::vector<CoverSet> sets) : space_(std::move(space)), sets_(std::move(sets)) {
  if (!space_) throw Error(ErrorCode::InputInvalid, "cover needs a space");
  membership_.assign(space_->size(), {});
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    sets_[i].members = normalize_members(std::move(sets_[i].members), space_->size(), "cover set '" + sets_[i].name + "'");
    for (auto x : sets_[i].members) membership_[x].push_back(i);
  }
}

bool Cover::contains(std::size_t set, std::size_t point) const {
  const auto& m = membership_[point];
  return std::binary_search(m.begin(), m.end(), set);
}

ValidationReport Cover::validate() const {
  ValidationReport report;
  for (std::size_t x = 0; x < space_->size(); ++x) {
    if (membership_[x].empty()) report.violation("cover.union", "point lies in no set", {space_->label(x)});
  }
  return report;
}

std::optional<std::int64_t> codistance_ticks(const Cover& cover, std::size_t set, std::size_t x) {
  const auto& X = cover.space();
  std::optional<std::int64_t> best;
  for (std::size_t z = 0; z < X.size(); ++z) {
    if (cover.contains(set, z)) continue;
    const auto t = X.ticks(x, z);
    if (!best || t < *best) best = t;
  }
  return best;
}

std::size_t multiplicity(const Cover& cover) {
  std::size_t best = 0;
  for (const auto& m : cover.membership()) best = std::max(best, m.size());
  return best;
}

std::size_t d_multiplicity(const Cover& cover, const Rational& d, unsigned jobs) {
  const auto& X = cover.space();
  const auto thr = X.threshold(d);
  const std::size_t n = X.size();
  std::vector<std::size_t> best(std::max<unsigned>(1, jobs), 0);
  std::size_t chunks = 0;
  for_each_chunk(n, jobs, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<std::size_t> stamp(cover.size(), kNoStamp);
    for (std::size_t x = begin; x < end; ++x) {
      std::size_t count = 0;
      for (std::size_t z = 0; z < n; ++z) {
        if (!thr.below(X.ticks(x, z))) continue;
        for (auto s : cover.membership()[z]) {
          if (stamp[s] != x) {
            stamp[s] = x;
            ++count;
          }
        }
      }
      best[c] = std::max(best[c], count);
    }
  });
  return *std::max_element(best.begin(), best.end());
}

ExtendedRational lebesgue_number(const Cover& cover, unsigned jobs) {
  const auto& X = cover.space();
  const std::size_t n = X.size();
  // Per chunk: minimum over x of the best co-distance; nullopt encodes +inf.
  std::vector<std::optional<std::int64_t>> chunk_min(std::max<unsigned>(1, jobs));
  std::size_t chunks = 0;
  for_each_chunk(n, jobs, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::optional<std::int64_t> low;
    for (std::size_t x = begin; x < end; ++x) {
      std::optional<std::int64_t> local = 0;
      bool infinite = false;
      for (auto s : cover.membership()[x]) {
        const auto cd = codistance_ticks(cover, s, x);
        if (!cd) {
          infinite = true;
          break;
        }
        local = std::max(*local, *cd);
      }
      if (infinite) continue;
      if (!low || *local < *low) low = local;
    }
    chunk_min[c] = low;
  });
  std::optional<std::int64_t> low;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (chunk_min[c] && (!low || *chunk_min[c] < *low)) low = chunk_min[c];
  }
  if (!low) return ExtendedRational::infinity();
  return ExtendedRational::finite(X.to_rational(*low));
}

Rational cover_mesh(const Cover& cover) {
  std::int64_t best = 0;
  for (const auto& s : cover.sets()) best = std::max(best, diameter_ticks(cover.space(), s.members));
  return cover.space().to_rational(best);
}

CoverStats cover_stats(const Cover& cover, const std::vector<Rational>& radii, unsigned jobs) {
  CoverStats stats;
  stats.multiplicity = multiplicity(cover);
  for (const auto& d : radii) stats.d_multiplicity[d] = d_multiplicity(cover, d, jobs);
  stats.lebesgue = lebesgue_number(cover, jobs);
  stats.mesh = cover_mesh(cover);
  return stats;
}

ValidationReport condition_A_report(const std::vector<Cover>& covers, const Rational& d, std::size_t n,
                                    const Rational& D, unsigned jobs) {
  ValidationReport report;
  for (const auto& c : covers) {
    report.merge(c.validate(), "condA.");
    const auto dm = d_multiplicity(c, d, jobs);
    if (dm > n + 1) {
      report.violation("condA.multiplicity", std::to_string(dm) + "-fold d-multiplicity exceeds n+1", {c.space().id()});
    }
    const auto mesh = cover_mesh(c);
    if (mesh > D) report.violation("condA.mesh", "mesh " + to_string(mesh) + " exceeds D", {c.space().id()});
  }
  return report;
}

ValidationReport condition_B_report(const std::vector<Cover>& covers, const Rational& lambda, std::size_t n,
                                    const Rational& D, unsigned jobs) {
  ValidationReport report;
  for (const auto& c : covers) {
    report.merge(c.validate(), "condB.");
    const auto mult = multiplicity(c);
    if (mult > n + 1) {
      report.violation("condB.multiplicity", "multiplicity " + std::to_string(mult) + " exceeds n+1", {c.space().id()});
    }
    const auto L = lebesgue_number(c, jobs);
    if (!L.at_least(lambda)) {
      report.violation("condB.lebesgue", "Lebesgue number " + to_string(L) + " below lambda", {c.space().id()});
    }
    const auto mesh = cover_mesh(c);
    if (mesh > D) report.violation("condB.mesh", "mesh " + to_string(mesh) + " exceeds D", {c.space().id()});
  }
  return report;
}

bool check_condition_A(const std::vector<Cover>& covers, const Rational& d, std::size_t n, const Rational& D) {
  return condition_A_report(covers, d, n, D).ok();
}

bool check_condition_B(const std::vector<Cover>& covers, const Rational& lambda, std::size_t n, const Rational& D) {
  return condition_B_report(covers, lambda, n, D).ok();
}

// ---------------------------------------------------------------------------

const Rational& DecompositionCertificate::bound() const {
  if (const auto* b = std::get_if<BoundedWitness>(&witness)) return b->D;
  return std::get<CoverWitness>(witness).D;
}

std::vector<PieceGap> close_piece_pairs(const FiniteMetricSpace& X, const std::vector<const Piece*>& pieces,
                                       const Threshold& thr, unsigned jobs) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < pieces.size(); ++a) {
    for (std::size_t b = a + 1; b < pieces.size(); ++b) {
      if (pieces[a]->space == pieces[b]->space && pieces[a]->color == pieces[b]->color) pairs.emplace_back(a, b);
    }
  }
  std::vector<std::vector<PieceGap>> found(std::max<unsigned>(1, jobs));
  std::size_t chunks = 0;
  for_each_chunk(pairs.size(), jobs, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto [a, b] = pairs[k];
      const auto t = min_ticks(X, pieces[a]->members, pieces[b]->members);
      if (!thr.above(t)) found[c].push_back({a, b, t});
    }
  });
  std::vector<PieceGap> out;
  for (std::size_t c = 0; c < chunks; ++c) out.insert(out.end(), found[c].begin(), found[c].end());
  return out;
}

namespace {

void check_colored_pieces(const FiniteMetricSpace& X, const std::vector<const Piece*>& pieces,
                          const std::vector<std::string>& tags, const Rational& scale, const Rational* D,
                          std::size_t colors, std::size_t depth, const std::vector<std::size_t>& domain,
                          std::string_view prefix, unsigned jobs, ValidationReport& report) {
  const std::string p(prefix);
  // Depth: distinct colors per point of the domain.
  std::vector<std::vector<char>> seen(X.size());
  for (const auto* piece : pieces) {
    if (piece->color >= colors) continue;
    for (auto x : piece->members) {
      if (seen[x].empty()) seen[x].assign(colors, 0);
      seen[x][piece->color] = 1;
    }
  }
  for (auto x : domain) {
    const auto k = seen[x].empty() ? 0 : static_cast<std::size_t>(std::count(seen[x].begin(), seen[x].end(), 1));
    if (k == 0) {
      report.violation(p + "union", "point lies in no piece", {X.id(), X.label(x)});
    } else if (k < depth) {
      report.violation(p + "depth", "point lies in " + std::to_string(k) + " colors, need " + std::to_string(depth),
                       {X.id(), X.label(x)});
    }
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i]->color >= colors) {
      report.violation(p + "color", "color " + std::to_string(pieces[i]->color) + " out of range", {X.id(), tags[i]});
    }
    if (!D) continue;
    const auto diam = X.to_rational(diameter_ticks(X, pieces[i]->members));
    if (diam > *D) {
      report.violation(p + "diameter", "diameter " + to_string(diam) + " exceeds D=" + to_string(*D), {X.id(), tags[i]});
    }
  }
  for (const auto& f : close_piece_pairs(X, pieces, X.threshold(scale), jobs)) {
    report.violation(p + "disjoint",
                     "color " + std::to_string(pieces[f.a]->color) + " pieces at distance " +
                         to_string(X.to_rational(f.ticks)) + ", need > " + to_string(scale),
                     {X.id(), std::to_string(pieces[f.a]->color), tags[f.a], tags[f.b]});
  }
}

}  // namespace

ValidationReport verify_certificate(const DecompositionCertificate& cert, unsigned jobs) {
  ValidationReport report;
  if (cert.family.empty()) {
    report.violation("cert.family", "family is empty");
    return report;
  }
  if (cert.r < 0) report.violation("cert.scale", "r must be >= 0");
  if (cert.depth == 0 || cert.depth > cert.colors()) {
    report.violation("cert.depth", "depth must lie in 1..n+1");
  }
  const auto* cw = std::get_if<CoverWitness>(&cert.witness);
  if (cw && cw->covers.size() != cert.pieces.size()) {
    report.violation("witness.count", "cover witness must list one cover per piece");
    cw = nullptr;
  }
  for (std::size_t s = 0; s < cert.family.size(); ++s) {
    const auto& X = *cert.family[s];
    std::vector<const Piece*> pieces;
    std::vector<std::string> tags;
    std::vector<std::size_t> piece_index;
    for (std::size_t i = 0; i < cert.pieces.size(); ++i) {
      const auto& p = cert.pieces[i];
      if (p.space != s) continue;
      if (p.members.empty() || p.members.back() >= X.size()) {
        report.violation("cert.piece", "piece is empty or leaves its space", {X.id(), piece_tag(p, i)});
        continue;
      }
      pieces.push_back(&p);
      tags.push_back(piece_tag(p, i));
      piece_index.push_back(i);
    }
    std::vector<std::size_t> all(X.size());
    for (std::size_t x = 0; x < X.size(); ++x) all[x] = x;
    check_colored_pieces(X, pieces, tags, cert.r, cert.bounded() ? &cert.bound() : nullptr, cert.colors(),
                         cert.depth, all, "cert.", jobs, report);
    if (!cw) continue;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const auto& inner = cw->covers[piece_index[k]];
      std::vector<const Piece*> sets;
      std::vector<std::string> set_tags;
      for (std::size_t q = 0; q < inner.size(); ++q) {
        const auto tag = tags[k] + "/" + piece_tag(inner[q], q);
        if (inner[q].space != s || !sorted_subset(inner[q].members, pieces[k]->members) || inner[q].members.empty()) {
          report.violation("witness.subset", "cover set is empty or not inside its piece", {X.id(), tag});
          continue;
        }
        sets.push_back(&inner[q]);
        set_tags.push_back(tag);
      }
      check_colored_pieces(X, sets, set_tags, cw->scale, &cw->D, cw->colors, cw->depth, pieces[k]->members, "witness.",
                           jobs, report);
    }
  }
  for (std::size_t i = 0; i < cert.pieces.size(); ++i) {
    if (cert.pieces[i].space >= cert.family.size()) {
      report.violation("cert.piece.space", "piece refers to a missing space", {piece_tag(cert.pieces[i], i)});
    }
  }
  return report;
}

std::vector<std::size_t> open_neighborhood(const FiniteMetricSpace& space, const std::vector<std::size_t>& members,
                                           const Rational& radius) {
  const auto thr = space.threshold(radius);
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < space.size(); ++y) {
    if (std::binary_search(members.begin(), members.end(), y)) {
      out.push_back(y);
      continue;
    }
    for (auto x : members) {
      if (thr.below(space.ticks(x, y))) {
        out.push_back(y);
        break;
      }
    }
  }
  return out;
}

ConditionBCovers certificate_to_condB(const DecompositionCertificate& cert, unsigned jobs) {
  if (!cert.bounded()) throw Error(ErrorCode::CertificateInvalid, "conversion needs a bounded witness");
  const auto check = verify_certificate(cert, jobs);
  if (!check.ok()) throw Error(ErrorCode::CertificateInvalid, check.summary());
  ConditionBCovers out;
  out.lambda = cert.r / 2;
  out.n = cert.n;
  out.D = cert.bound() + cert.r;
  for (std::size_t s = 0; s < cert.family.size(); ++s) {
    std::vector<CoverSet> sets;
    for (std::size_t i = 0; i < cert.pieces.size(); ++i) {
      const auto& p = cert.pieces[i];
      if (p.space != s) continue;
      sets.push_back({piece_tag(p, i), open_neighborhood(*cert.family[s], p.members, out.lambda)});
    }
    out.covers.emplace_back(cert.family[s], std::move(sets));
  }
  out.report = condition_B_report(out.covers, out.lambda, out.n, out.D, jobs);
  return out;
}

}  // namespace coarsekit
