#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarsekit/rational.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit {

/// A rational threshold q expressed in a space's integer tick units, so
/// that comparisons against many distances are integer comparisons.
struct Threshold {
  std::int64_t floor = 0;  // floor(q * denominator)
  std::int64_t ceil = 0;   // ceil(q * denominator)

  bool below(std::int64_t t) const { return t < ceil; }      // t < q
  bool at_most(std::int64_t t) const { return t <= floor; }  // t <= q
  bool above(std::int64_t t) const { return t > floor; }     // t > q
  bool at_least(std::int64_t t) const { return t >= ceil; }  // t >= q
};

/// Labeled finite point set with an exact rational distance table.
///
/// Distances are stored as int64 numerators over one shared positive
/// denominator. The table is either dense or computed on demand (used for
/// large lattice windows whose metric has a closed form).
class FiniteMetricSpace {
 public:
  using TickFunction = std::function<std::int64_t(std::size_t, std::size_t)>;

  FiniteMetricSpace(std::string id, std::vector<std::string> points,
                    const std::vector<std::vector<Rational>>& dist);

  static FiniteMetricSpace from_ticks(std::string id, std::vector<std::string> points,
                                      std::int64_t denominator, std::vector<std::int64_t> ticks);
  static FiniteMetricSpace from_function(std::string id, std::vector<std::string> points,
                                         std::int64_t denominator, TickFunction fn);

  const std::string& id() const { return data_->id; }
  std::size_t size() const { return data_->labels.size(); }
  const std::string& label(std::size_t i) const { return data_->labels[i]; }
  const std::vector<std::string>& labels() const { return data_->labels; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  /// Throws Error(InputInvalid) for an unknown label.
  std::size_t require_index(std::string_view label) const;

  std::int64_t ticks(std::size_t i, std::size_t j) const {
    const auto& d = *data_;
    return d.dense.empty() ? d.fn(i, j) : d.dense[i * d.labels.size() + j];
  }
  std::int64_t denominator() const { return data_->denominator; }
  Rational distance(std::size_t i, std::size_t j) const { return to_rational(ticks(i, j)); }
  Rational to_rational(std::int64_t ticks) const { return make_rational(ticks, data_->denominator); }
  Threshold threshold(const Rational& q) const;
  bool is_dense() const { return !data_->dense.empty() || data_->labels.empty(); }

 private:
  struct Data {
    std::string id;
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
    std::int64_t denominator = 1;
    std::vector<std::int64_t> dense;
    TickFunction fn;
  };
  explicit FiniteMetricSpace(std::shared_ptr<Data> d) : data_(std::move(d)) {}
  static std::shared_ptr<Data> make_data(std::string id, std::vector<std::string> labels);

  std::shared_ptr<const Data> data_;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// Nonempty subset of a parent space, carrying the parent metric.
class SubSpace {
 public:
  SubSpace(SpacePtr parent, std::vector<std::size_t> members, std::string id = {});

  static SubSpace whole(SpacePtr parent);
  static SubSpace from_labels(SpacePtr parent, std::span<const std::string> labels, std::string id = {});

  const FiniteMetricSpace& parent() const { return *parent_; }
  const SpacePtr& parent_ptr() const { return parent_; }
  const std::vector<std::size_t>& members() const { return members_; }
  const std::string& id() const { return id_; }
  std::size_t size() const { return members_.size(); }
  bool contains(std::size_t point) const;

 private:
  SpacePtr parent_;
  std::vector<std::size_t> members_;
  std::string id_;
};

class MetricFamily {
 public:
  explicit MetricFamily(std::vector<SubSpace> members);
  const std::vector<SubSpace>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const SubSpace& operator[](std::size_t i) const { return members_[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;

 private:
  std::vector<SubSpace> members_;
};

ValidationReport validate_metric(const FiniteMetricSpace& space, unsigned jobs = 1);

/// Minimum distance between two nonempty index sets, in ticks.
std::int64_t min_ticks(const FiniteMetricSpace& space, std::span<const std::size_t> a,
                       std::span<const std::size_t> b);
/// Maximum pairwise distance of an index set, in ticks (0 for singletons).
std::int64_t diameter_ticks(const FiniteMetricSpace& space, std::span<const std::size_t> a);
/// True iff min distance between a and b is strictly greater than the threshold.
bool separated(const FiniteMetricSpace& space, std::span<const std::size_t> a,
               std::span<const std::size_t> b, const Threshold& r);

/// Throws Error(MismatchedParent) when the parents differ.
Rational set_distance(const SubSpace& a, const SubSpace& b);
/// Strict: every distinct pair of pieces is at distance > r.
bool is_r_disjoint(std::span<const SubSpace> pieces, const Rational& r);
Rational diameter(const SubSpace& a);
Rational mesh(const MetricFamily& family);

/// Non-decreasing piecewise-linear function on [0, inf), given by
/// breakpoints (t_0 = 0 < t_1 < ...); extended past the last breakpoint
/// with the slope of the last segment.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breakpoints);

  static PiecewiseLinear linear(const Rational& slope);

  Rational operator()(const Rational& t) const;
  const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return points_; }
  void validate(std::string_view name, ValidationReport& report) const;

 private:
  std::vector<std::pair<Rational, Rational>> points_;
};

struct ControlFunctions {
  PiecewiseLinear delta;
  PiecewiseLinear rho;

  ValidationReport validate() const;
};

struct MapPiece {
  SubSpace domain;
  SubSpace codomain;
  /// table[k] is the parent index (in codomain's parent) of the image of domain.members()[k].
  std::vector<std::size_t> table;
};

struct FamilyMap {
  std::vector<MapPiece> pairs;
};

/// Checks delta(d(x,y)) <= d(f x, f y) <= rho(d(x,y)) for every pair.
ValidationReport check_coarse_embedding(const FamilyMap& map, const ControlFunctions& cf);

// Builders.
FiniteMetricSpace path_space(std::size_t n, std::string id = "P");
FiniteMetricSpace integer_interval(std::int64_t lo, std::int64_t hi, std::string id = "Z");
/// Integer box with the l1 metric; labels "(a,b,...)", computed on demand.
FiniteMetricSpace lattice_box(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi, std::string id = "Zd");
/// Shortest-path metric of a positively weighted graph. Throws Error(InputInvalid) if disconnected.
FiniteMetricSpace shortest_path_space(std::string id, std::vector<std::string> labels,
                                      const std::vector<std::tuple<std::size_t, std::size_t, Rational>>& edges);

/// Lattice coordinates of a point of lattice_box, parsed from its label.
std::vector<std::int64_t> lattice_coordinates(std::string_view label);

}  // namespace coarsekit
