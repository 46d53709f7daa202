#include "coarsekit/amenability.hpp"

#include <algorithm>

#include "coarsekit/error.hpp"

namespace coarsekit {

SubgroupFamilyWindow::SubgroupFamilyWindow(GroupPtr group, std::vector<Member> members)
    : group_(std::move(group)), members_(std::move(members)) {
  if (!group_) throw Error(ErrorCode::InputInvalid, "subgroup family needs a group");
  for (auto& m : members_) {
    std::sort(m.elements.begin(), m.elements.end());
    m.elements.erase(std::unique(m.elements.begin(), m.elements.end()), m.elements.end());
    if (!m.elements.empty() && m.elements.back() >= group_->size()) {
      throw Error(ErrorCode::InputInvalid, "subgroup '" + m.name + "' has an element outside the window");
    }
  }
  for (std::size_t i = 0; i < members_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (members_[i].name == members_[j].name) {
        throw Error(ErrorCode::InputInvalid, "duplicate subgroup name '" + members_[i].name + "'");
      }
    }
  }
}

std::optional<std::size_t> SubgroupFamilyWindow::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t SubgroupFamilyWindow::require_index(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  throw Error(ErrorCode::InputInvalid, "unknown subgroup '" + std::string(name) + "'");
}

bool SubgroupFamilyWindow::contains(std::size_t member, std::size_t g) const {
  const auto& e = members_[member].elements;
  return std::binary_search(e.begin(), e.end(), g);
}

ValidationReport SubgroupFamilyWindow::validate() const {
  ValidationReport report;
  const auto& G = *group_;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& H = members_[i];
    if (!contains(i, G.identity())) report.violation("family.identity", "subgroup misses e", {H.name});
    for (auto a : H.elements) {
      if (!contains(i, G.inverse(a))) report.violation("family.inverse", "subgroup not closed under inverses", {H.name, G.label(a)});
      for (auto b : H.elements) {
        const auto ab = G.multiply(a, b);
        if (ab != kOutside && !contains(i, ab)) {
          report.violation("family.product", "subgroup not closed under products", {H.name, G.label(a), G.label(b)});
        }
      }
    }
    for (std::size_t g = 0; g < G.size(); ++g) {
      // Conjugate g H g^-1, restricted to elements computable in the window.
      std::vector<std::size_t> conj;
      bool complete = true;
      for (auto h : H.elements) {
        const auto gh = G.multiply(g, h);
        const auto c = gh == kOutside ? kOutside : G.multiply(gh, G.inverse(g));
        if (c == kOutside) {
          complete = false;
          continue;
        }
        conj.push_back(c);
      }
      std::sort(conj.begin(), conj.end());
      conj.erase(std::unique(conj.begin(), conj.end()), conj.end());
      const bool found = std::any_of(members_.begin(), members_.end(), [&](const Member& K) {
        return complete ? K.elements == conj : std::includes(K.elements.begin(), K.elements.end(), conj.begin(), conj.end());
      });
      if (!found) report.warning("family.conjugation", "no listed member matches g H g^-1 on the window", {H.name, G.label(g)});
    }
  }
  report.warning("family.caveat", "closure under conjugation and subgroups is only checked inside the window");
  return report;
}

ValidationReport is_F_subset(const std::vector<std::size_t>& U, const std::vector<std::size_t>& F, const ProductWindow& gx) {
  ValidationReport report;
  const auto& G = gx.group();
  std::vector<char> in(gx.size(), 0);
  for (auto y : U) in[y] = 1;
  for (std::size_t g = 0; g < G.size(); ++g) {
    const bool member = std::binary_search(F.begin(), F.end(), g);
    bool truncated = false;
    for (std::size_t y = 0; y < gx.size(); ++y) {
      const auto gy = gx.act(g, y);
      if (gy == kOutside) {
        truncated = truncated || in[y];
        continue;
      }
      if (member && in[y] != in[gy]) {
        report.violation("fsubset.invariant", "g in F but gU != U", {G.label(g), gx.label(in[y] ? y : gy)});
        break;
      }
      if (!member && in[y] && in[gy]) {
        report.violation("fsubset.disjoint", "g not in F but gU meets U", {G.label(g), gx.label(gy)});
        break;
      }
    }
    if (truncated) report.uncertified("fsubset.window", "g.u leaves the window for some u in U", {G.label(g)});
  }
  return report;
}

ValidationReport check_N_F_amenable(const ProductWindow& gx, const SubgroupFamilyWindow& family,
                                    const FCoverWindow& fc, const std::vector<std::size_t>& S, std::size_t N) {
  ValidationReport report;
  const auto& cover = *fc.cover;
  const auto& G = gx.group();
  if (cover.space().size() != gx.size()) throw Error(ErrorCode::InputInvalid, "cover does not live on G x X");
  if (fc.assigned.size() != cover.size()) throw Error(ErrorCode::InputInvalid, "every cover set needs a family member");
  report.merge(family.validate());
  for (std::size_t u = 0; u < cover.size(); ++u) {
    const auto& F = family.members()[fc.assigned[u]].elements;
    auto sub = is_F_subset(cover.sets()[u].members, F, gx);
    for (auto f : sub.findings()) {
      f.witness.insert(f.witness.begin(), cover.sets()[u].name);
      report.add(std::move(f));
    }
  }
  // G-invariance: every in-window translate of U agrees with some listed set.
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t u = 0; u < cover.size(); ++u) {
      bool truncated = false;
      for (auto y : cover.sets()[u].members) truncated = truncated || gx.act(g, y) == kOutside;
      bool matched = false;
      for (std::size_t v = 0; v < cover.size() && !matched; ++v) {
        bool same = true;
        for (std::size_t y = 0; y < gx.size() && same; ++y) {
          const auto gy = gx.act(g, y);
          if (gy != kOutside) same = cover.contains(u, y) == cover.contains(v, gy);
        }
        matched = same;
      }
      if (!matched) {
        report.violation("cover.invariant", "gU is not a member of the cover", {G.label(g), cover.sets()[u].name});
      } else if (truncated) {
        report.uncertified("cover.invariant.window", "gU only partly inside the window", {G.label(g), cover.sets()[u].name});
      }
    }
  }
  for (std::size_t y = 0; y < gx.size(); ++y) {
    const auto k = cover.membership()[y].size();
    if (k > N + 1) {
      report.violation("cover.dimension", std::to_string(k) + " sets meet at a point, N+1 = " + std::to_string(N + 1),
                       {gx.label(y)});
      break;
    }
  }
  const std::size_t nx = gx.action().point_count();
  for (std::size_t x = 0; x < nx; ++x) {
    bool captured = false;
    for (std::size_t u = 0; u < cover.size() && !captured; ++u) {
      captured = std::all_of(S.begin(), S.end(), [&](std::size_t s) { return cover.contains(u, gx.index(s, x)); });
    }
    if (!captured) report.violation("cover.capture", "no set contains S x {x}", {gx.action().point(x)});
  }
  return report;
}

PipelineResult run_amenable_pipeline(const ProductPtr& gx, const NormTablePtr& norms, const SubgroupFamilyWindow& family,
                                     const FCoverWindow& fc, const Rational& epsilon, std::size_t N,
                                     const std::vector<std::size_t>& S, unsigned jobs) {
  if (epsilon < 0) throw Error(ErrorCode::InputInvalid, "epsilon must be >= 0");
  const auto& cover = *fc.cover;
  const auto metric = validate_product_metric(*gx, cover.space(), *norms, jobs);
  if (!metric.ok()) {
    const auto* f = metric.first(Severity::Violation);
    throw Error(ErrorCode::PreconditionFailed, "G x X metric invalid: " + f->rule + " " + f->message);
  }
  PipelineResult out;
  const Rational n(static_cast<long>(N));
  if (epsilon == 0) {
    out.R = ExtendedRational::infinity();
    for (std::size_t y = 0; y < gx->size(); ++y) {
      bool whole = false;
      for (auto u : cover.membership()[y]) whole = whole || !codistance_ticks(cover, u, y);
      if (!whole) {
        throw Error(ErrorCode::PreconditionFailed, "eps = 0 needs R = inf; point '" + gx->label(y) + "' is not inf-fat");
      }
    }
  } else {
    out.R = ExtendedRational::finite((2 * n + 2) * (2 * n + 3) / epsilon);
    if (auto y = first_unfat_point(cover, out.R.value)) {
      throw Error(ErrorCode::PreconditionFailed,
                  "point '" + gx->label(*y) + "' has no set U with B(y;" + to_string(out.R.value) + ") inside U");
    }
  }

  out.E = std::make_shared<const UniformComplex>(nerve_of_cover(cover));
  out.action = std::make_shared<const SimplicialAction>(induced_cover_action(cover, *gx, out.E));
  out.report.merge(out.action->validate(), "pipeline.");

  const auto& G = gx->group();
  out.f.domain = gx->action_ptr();
  out.f.target = out.action;
  out.f.epsilon = epsilon;
  out.f.norms = norms;
  for (std::size_t x = 0; x < gx->action().point_count(); ++x) out.f.f.push_back(psi_map(cover, gx->index(G.identity(), x)));

  if (out.E->dimension() > N) {
    out.report.violation("pipeline.dimension", "dim E = " + std::to_string(out.E->dimension()) + " exceeds N");
  }
  for (std::size_t v = 0; v < out.E->vertex_count(); ++v) {
    out.stabilizers.push_back(out.action->stabilizer(v));
    const auto member = fc.assigned.at(v);
    for (auto g : out.stabilizers.back()) {
      if (!family.contains(member, g)) {
        out.report.violation("pipeline.stabilizer", "stabilizer element outside the assigned subgroup",
                             {out.E->label(v), G.label(g), family.members()[member].name});
      }
    }
    if (out.stabilizers.back() != family.members()[member].elements) {
      out.report.warning("pipeline.stabilizer.proper", "window stabilizer is smaller than the assigned subgroup",
                         {out.E->label(v)});
    }
  }
  out.equivariance = check_equivariance_up_to(out.f);
  out.report.merge(out.equivariance.global, "pipeline.");
  out.report.merge(out.equivariance.generators, "pipeline.generators.");
  out.fcover = check_N_F_amenable(*gx, family, fc, S, N);
  return out;
}

}  // namespace coarsekit
