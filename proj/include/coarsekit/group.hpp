#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coarsekit/metric.hpp"
#include "coarsekit/rational.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit {

/// Marker for "product/action not defined inside the window".
inline constexpr std::size_t kOutside = static_cast<std::size_t>(-1);

struct Generator {
  std::size_t element = 0;
  Rational weight;
};

/// A finite piece of a countable group: labeled elements containing the
/// identity, a partial multiplication table (defined when g, h and gh all
/// lie in the window), total inversion, and a symmetric weighted
/// generating set.
class GroupWindow {
 public:
  GroupWindow(std::vector<std::string> elements, std::size_t identity, std::vector<std::size_t> mult,
              std::vector<std::size_t> inv, std::vector<Generator> gens);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t g) const { return labels_[g]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  std::size_t require_index(std::string_view label) const;
  std::size_t identity() const { return identity_; }

  std::size_t multiply(std::size_t g, std::size_t h) const { return mult_[g * labels_.size() + h]; }
  std::size_t inverse(std::size_t g) const { return inv_[g]; }
  const std::vector<Generator>& generators() const { return gens_; }

  /// Copy with one product entry overwritten (fault injection, table repair).
  GroupWindow with_product(std::size_t g, std::size_t h, std::size_t value) const;

  /// Identity, inversion, generator symmetry and associativity on every
  /// triple whose intermediate products are in-window.
  ValidationReport validate() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> mult_;
  std::vector<std::size_t> inv_;
  std::vector<Generator> gens_;
};

using GroupPtr = std::shared_ptr<const GroupWindow>;

/// Builds a window from a canonical-form product. `product` returns
/// std::nullopt when the result leaves the element list.
GroupWindow make_group_window(std::vector<std::string> labels, std::size_t identity,
                              const std::function<std::optional<std::size_t>(std::size_t, std::size_t)>& product,
                              const std::function<std::size_t(std::size_t)>& inverse,
                              std::vector<Generator> gens);

/// Adds s^{-1} with weight W(s) for every listed generator whose inverse is
/// missing; drops exact duplicates.
std::vector<Generator> symmetrize(const GroupWindow& window, std::vector<Generator> gens);

// Built-in windows. Labels: Z^1 elements "n", Z^d elements "(a,b,..)",
// free group reduced words over a,b,c.. with inverses A,B,C.. and "e",
// cyclic "0".."n-1", dihedral "r<k>" / "s<k>" (s r^k), Heisenberg "(a,b,c)".

/// Box [-radius, radius]^d with generators +-e_i of weight weights[i] (default 1).
GroupWindow integer_lattice_window(std::size_t dim, std::int64_t radius, std::vector<Rational> weights = {});
/// Interval [-radius, radius] of Z with generators +-step of the given weights.
GroupWindow integer_window_with_generators(std::int64_t radius,
                                           const std::vector<std::pair<std::int64_t, Rational>>& gens);
/// Ball of reduced-word radius `radius` in the free group of the given rank, unit weights.
GroupWindow free_group_ball(std::size_t rank, std::size_t radius);
GroupWindow cyclic_group(std::size_t n);
/// Symmetries of the n-gon (order 2n), generated by r, r^{-1} and s.
GroupWindow dihedral_group(std::size_t n);
/// Discrete Heisenberg group, (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab'),
/// window |a|,|b| <= radius, |c| <= central_radius, |ab - c| <= central_radius,
/// generators x, y and inverses.
GroupWindow heisenberg_window(std::int64_t radius, std::int64_t central_radius);

/// Exact weighted word norms on a window, certified up to `radius`.
class WordMetricTable {
 public:
  WordMetricTable(GroupPtr window, Rational radius, std::vector<std::optional<Rational>> computed,
                  std::vector<bool> certified);

  const GroupWindow& window() const { return *window_; }
  const GroupPtr& window_ptr() const { return window_; }
  const Rational& radius() const { return radius_; }

  bool certified(std::size_t g) const { return certified_[g]; }
  /// Throws Error(Uncertified) when the value is not certified exact.
  const Rational& norm(std::size_t g) const;
  /// Shortest in-window value, certified or not (nullopt if unreachable).
  const std::optional<Rational>& computed(std::size_t g) const { return computed_[g]; }
  std::size_t certified_count() const;

 private:
  GroupPtr window_;
  Rational radius_;
  std::vector<std::optional<Rational>> computed_;
  std::vector<bool> certified_;
};

using NormTablePtr = std::shared_ptr<const WordMetricTable>;

/// Shortest-path search from e over generator edges g -> g s. Throws
/// Error(WindowTooSmall) when some edge of total weight <= radius leaves
/// the window.
WordMetricTable word_norms(GroupPtr window, const Rational& radius);

/// Largest radius word_norms accepts on this window: the greatest computed
/// norm strictly below the cheapest generator edge that leaves the window.
/// For windows closed under multiplication, the largest computed norm.
Rational default_norm_radius(const GroupPtr& window);

/// d_W(g,h) = ||g^{-1} h||_W. Throws Error(Uncertified).
Rational word_distance(const WordMetricTable& table, std::size_t g, std::size_t h);
std::optional<Rational> try_word_distance(const WordMetricTable& table, std::size_t g, std::size_t h);

/// d(ag, ah) = d(g, h) on every certified in-window triple.
ValidationReport check_left_invariance(const WordMetricTable& table);

/// Open ball {g : ||g|| < R} with the restricted word metric. Throws
/// Error(EmptyBall) for R <= 0 and Error(Uncertified) when R exceeds the
/// certified radius or a pairwise distance cannot be certified.
FiniteMetricSpace group_ball(const WordMetricTable& table, const Rational& R);

/// Path metric of the window's Cayley graph (edges g -> g s of weight W(s)),
/// restricted to paths inside the window. Throws Error(InputInvalid) if the
/// window's Cayley graph is disconnected.
FiniteMetricSpace window_path_metric(const GroupWindow& window, std::string id = "G");

}  // namespace coarsekit
