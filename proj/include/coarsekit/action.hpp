#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coarsekit/group.hpp"
#include "coarsekit/metric.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit {

/// A group window acting on a finite set X. The table is partial: kOutside
/// marks g.x values the window cannot certify.
class ActionWindow {
 public:
  ActionWindow(GroupPtr group, std::vector<std::string> points, std::vector<std::size_t> table);

  const GroupWindow& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  std::size_t point_count() const { return points_.size(); }
  const std::string& point(std::size_t x) const { return points_[x]; }
  const std::vector<std::string>& points() const { return points_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  std::size_t require_index(std::string_view label) const;

  std::size_t act(std::size_t g, std::size_t x) const { return table_[g * points_.size() + x]; }

  /// e.x = x, and (gh).x = g.(h.x) wherever both sides are defined.
  ValidationReport validate() const;

 private:
  GroupPtr group_;
  std::vector<std::string> points_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> table_;
};

using ActionPtr = std::shared_ptr<const ActionWindow>;

ActionWindow make_action(GroupPtr group, std::vector<std::string> points,
                         const std::function<std::optional<std::size_t>(std::size_t, std::size_t)>& act);
ActionWindow trivial_action(GroupPtr group, std::vector<std::string> points);
/// Left multiplication of the window on its own elements.
ActionWindow regular_action(GroupPtr group);
/// Z^1 window acting on Z/n by n.x = x + n mod n; points "0".."n-1".
ActionWindow rotation_action(GroupPtr integer_window, std::size_t n);

/// G x X with the diagonal action g.(h,x) = (gh, g.x). Point (g,x) has index
/// g * |X| + x and label "g,x".
class ProductWindow {
 public:
  explicit ProductWindow(ActionPtr action);

  const ActionWindow& action() const { return *action_; }
  const ActionPtr& action_ptr() const { return action_; }
  const GroupWindow& group() const { return action_->group(); }

  std::size_t size() const { return labels_.size(); }
  std::size_t index(std::size_t g, std::size_t x) const { return g * action_->point_count() + x; }
  std::size_t group_part(std::size_t y) const { return y / action_->point_count(); }
  std::size_t space_part(std::size_t y) const { return y % action_->point_count(); }
  const std::string& label(std::size_t y) const { return labels_[y]; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Splits on the last comma. Throws Error(InputInvalid).
  std::size_t require_index(std::string_view label) const;

  std::size_t act(std::size_t g, std::size_t y) const;

 private:
  ActionPtr action_;
  std::vector<std::string> labels_;
};

using ProductPtr = std::shared_ptr<const ProductWindow>;

/// d((g,x),(h,y)) = d_G(g,h) + lambda * d_X(x,y). Labels of d_G and d_X must
/// match the group elements and X points.
FiniteMetricSpace product_sum_metric(const ProductWindow& gx, const FiniteMetricSpace& dG,
                                     const FiniteMetricSpace& dX, const Rational& lambda, std::string id = "GxX");

/// Metric axioms, invariance under the diagonal action, and
/// d((g,x),(h,x)) = d_W(g,h) on certified pairs.
ValidationReport validate_product_metric(const ProductWindow& gx, const FiniteMetricSpace& d,
                                         const WordMetricTable& norms, unsigned jobs = 1);

}  // namespace coarsekit
