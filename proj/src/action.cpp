#include "coarsekit/action.hpp"

#include "coarsekit/error.hpp"

namespace coarsekit {

ActionWindow::ActionWindow(GroupPtr group, std::vector<std::string> points, std::vector<std::size_t> table)
    : group_(std::move(group)), points_(std::move(points)), table_(std::move(table)) {
  if (!group_) throw Error(ErrorCode::InputInvalid, "action needs a group window");
  if (points_.empty()) throw Error(ErrorCode::InputInvalid, "action needs a nonempty point set");
  if (table_.size() != group_->size() * points_.size()) {
    throw Error(ErrorCode::InputInvalid, "action table must have |G| * |X| entries");
  }
  for (auto v : table_) {
    if (v != kOutside && v >= points_.size()) throw Error(ErrorCode::InputInvalid, "action entry out of range");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second) {
      throw Error(ErrorCode::InputInvalid, "duplicate point '" + points_[i] + "'");
    }
  }
}

std::optional<std::size_t> ActionWindow::index_of(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ActionWindow::require_index(std::string_view label) const {
  if (auto x = index_of(label)) return *x;
  throw Error(ErrorCode::InputInvalid, "unknown point '" + std::string(label) + "'");
}

ValidationReport ActionWindow::validate() const {
  ValidationReport report;
  const auto& G = *group_;
  for (std::size_t x = 0; x < point_count(); ++x) {
    if (act(G.identity(), x) != x) report.violation("action.identity", "e.x != x", {points_[x]});
  }
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t h = 0; h < G.size(); ++h) {
      const auto gh = G.multiply(g, h);
      if (gh == kOutside) continue;
      for (std::size_t x = 0; x < point_count(); ++x) {
        const auto hx = act(h, x);
        if (hx == kOutside) continue;
        const auto left = act(gh, x);
        const auto right = act(g, hx);
        if (left != kOutside && right != kOutside && left != right) {
          report.violation("action.compatible", "(gh).x != g.(h.x)", {G.label(g), G.label(h), points_[x]});
        }
      }
    }
  }
  return report;
}

ActionWindow make_action(GroupPtr group, std::vector<std::string> points,
                         const std::function<std::optional<std::size_t>(std::size_t, std::size_t)>& act) {
  std::vector<std::size_t> table(group->size() * points.size(), kOutside);
  for (std::size_t g = 0; g < group->size(); ++g) {
    for (std::size_t x = 0; x < points.size(); ++x) {
      if (auto y = act(g, x)) table[g * points.size() + x] = *y;
    }
  }
  return ActionWindow(std::move(group), std::move(points), std::move(table));
}

ActionWindow trivial_action(GroupPtr group, std::vector<std::string> points) {
  return make_action(std::move(group), std::move(points),
                     [](std::size_t, std::size_t x) -> std::optional<std::size_t> { return x; });
}

ActionWindow regular_action(GroupPtr group) {
  auto points = group->labels();
  const GroupWindow& G = *group;
  return make_action(std::move(group), std::move(points), [&G](std::size_t g, std::size_t x) -> std::optional<std::size_t> {
    const auto gx = G.multiply(g, x);
    if (gx == kOutside) return std::nullopt;
    return gx;
  });
}

ActionWindow rotation_action(GroupPtr integer_window, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InputInvalid, "rotation action needs n >= 1");
  std::vector<std::string> points;
  for (std::size_t i = 0; i < n; ++i) points.push_back(std::to_string(i));
  std::vector<std::int64_t> shift(integer_window->size());
  for (std::size_t g = 0; g < integer_window->size(); ++g) {
    const auto c = lattice_coordinates(integer_window->label(g));
    if (c.size() != 1) throw Error(ErrorCode::InputInvalid, "rotation action needs a Z window");
    shift[g] = c[0];
  }
  const auto sn = static_cast<std::int64_t>(n);
  return make_action(std::move(integer_window), std::move(points),
                     [&](std::size_t g, std::size_t x) -> std::optional<std::size_t> {
                       return static_cast<std::size_t>(((static_cast<std::int64_t>(x) + shift[g]) % sn + sn) % sn);
                     });
}

// ---------------------------------------------------------------------------

ProductWindow::ProductWindow(ActionPtr action) : action_(std::move(action)) {
  if (!action_) throw Error(ErrorCode::InputInvalid, "product window needs an action");
  const auto& G = action_->group();
  labels_.reserve(G.size() * action_->point_count());
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t x = 0; x < action_->point_count(); ++x) labels_.push_back(G.label(g) + "," + action_->point(x));
  }
}

std::size_t ProductWindow::require_index(std::string_view label) const {
  const auto comma = label.rfind(',');
  if (comma == std::string_view::npos) {
    throw Error(ErrorCode::InputInvalid, "G x X point '" + std::string(label) + "' must look like g,x");
  }
  const auto g = group().require_index(label.substr(0, comma));
  const auto x = action_->require_index(label.substr(comma + 1));
  return index(g, x);
}

std::size_t ProductWindow::act(std::size_t g, std::size_t y) const {
  const auto gh = group().multiply(g, group_part(y));
  const auto gx = action_->act(g, space_part(y));
  if (gh == kOutside || gx == kOutside) return kOutside;
  return index(gh, gx);
}

FiniteMetricSpace product_sum_metric(const ProductWindow& gx, const FiniteMetricSpace& dG,
                                     const FiniteMetricSpace& dX, const Rational& lambda, std::string id) {
  const auto& G = gx.group();
  const auto& A = gx.action();
  if (lambda < 0) throw Error(ErrorCode::InputInvalid, "product metric weight must be >= 0");
  std::vector<std::size_t> gmap(G.size());
  std::vector<std::size_t> xmap(A.point_count());
  for (std::size_t g = 0; g < G.size(); ++g) gmap[g] = dG.require_index(G.label(g));
  for (std::size_t x = 0; x < A.point_count(); ++x) xmap[x] = dX.require_index(A.point(x));
  const std::size_t n = gx.size();
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      dist[a][b] = dG.distance(gmap[gx.group_part(a)], gmap[gx.group_part(b)]) +
                   lambda * dX.distance(xmap[gx.space_part(a)], xmap[gx.space_part(b)]);
    }
  }
  return FiniteMetricSpace(std::move(id), gx.labels(), dist);
}

ValidationReport validate_product_metric(const ProductWindow& gx, const FiniteMetricSpace& d,
                                         const WordMetricTable& norms, unsigned jobs) {
  ValidationReport report;
  if (d.size() != gx.size()) {
    report.violation("product.size", "metric has " + std::to_string(d.size()) + " points, G x X has " +
                                         std::to_string(gx.size()));
    return report;
  }
  for (std::size_t y = 0; y < gx.size(); ++y) {
    if (d.label(y) != gx.label(y)) {
      report.violation("product.labels", "metric point order differs from G x X", {d.label(y), gx.label(y)});
      return report;
    }
  }
  report.merge(validate_metric(d, jobs), "product.");
  const auto& G = gx.group();
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t a = 0; a < gx.size(); ++a) {
      const auto ga = gx.act(g, a);
      if (ga == kOutside) continue;
      for (std::size_t b = 0; b < gx.size(); ++b) {
        const auto gb = gx.act(g, b);
        if (gb == kOutside) continue;
        if (d.ticks(ga, gb) != d.ticks(a, b)) {
          report.violation("product.invariant", "d(g.y, g.z) != d(y, z)", {G.label(g), gx.label(a), gx.label(b)});
        }
      }
    }
  }
  std::size_t skipped = 0;
  const std::size_t nx = gx.action().point_count();
  for (std::size_t g = 0; g < G.size(); ++g) {
    for (std::size_t h = 0; h < G.size(); ++h) {
      const auto dw = try_word_distance(norms, g, h);
      if (!dw) {
        ++skipped;
        continue;
      }
      for (std::size_t x = 0; x < nx; ++x) {
        if (d.distance(gx.index(g, x), gx.index(h, x)) != *dw) {
          report.violation("product.restriction", "d((g,x),(h,x)) != d_W(g,h)",
                           {gx.label(gx.index(g, x)), gx.label(gx.index(h, x))});
        }
      }
    }
  }
  if (skipped > 0) {
    report.warning("product.restriction.skipped", std::to_string(skipped) + " group pairs had uncertified d_W");
  }
  return report;
}

}  // namespace coarsekit
