#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coarsekit/action.hpp"
#include "coarsekit/decomposition.hpp"
#include "coarsekit/group.hpp"
#include "coarsekit/rational.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit {

/// Finite simplicial complex stored by its maximal simplices; every subset
/// of a listed simplex is a simplex, and every vertex is one.
class UniformComplex {
 public:
  UniformComplex(std::vector<std::string> vertices, std::vector<std::vector<std::size_t>> simplices);

  std::size_t vertex_count() const { return labels_.size(); }
  const std::string& label(std::size_t v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  std::size_t require_index(std::string_view label) const;

  const std::vector<std::vector<std::size_t>>& facets() const { return facets_; }
  /// `sorted` must be ascending and duplicate-free.
  bool is_simplex(const std::vector<std::size_t>& sorted) const;
  std::size_t dimension() const;
  /// Every simplex, by size then lexicographically. Exponential in facet size.
  std::vector<std::vector<std::size_t>> simplices() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> facets_;
};

using ComplexPtr = std::shared_ptr<const UniformComplex>;

/// Point of |K| as sparse barycentric coordinates; only nonzero entries are stored.
struct NervePoint {
  std::map<std::size_t, Rational> coords;

  static NervePoint vertex(std::size_t v);
  Rational coordinate(std::size_t v) const;
  std::vector<std::size_t> support() const;
  bool operator==(const NervePoint& other) const { return coords == other.coords; }
};

/// Positive coordinates summing to 1 on a simplex of K.
ValidationReport validate_point(const UniformComplex& K, const NervePoint& p);
Rational l1_distance(const NervePoint& p, const NervePoint& q);

/// One vertex per set (labelled by set name); maximal simplices are the
/// distinct maximal sets {U : x in U}.
UniformComplex nerve_of_cover(const Cover& cover);

/// Vertex action of a group window on a complex; kOutside marks
/// undefined entries.
class SimplicialAction {
 public:
  SimplicialAction(ComplexPtr complex, GroupPtr group, std::vector<std::size_t> table);

  const UniformComplex& complex() const { return *complex_; }
  const ComplexPtr& complex_ptr() const { return complex_; }
  const GroupWindow& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }

  std::size_t act_vertex(std::size_t g, std::size_t v) const { return table_[g * complex_->vertex_count() + v]; }
  /// nullopt when some support vertex has no in-window image.
  std::optional<NervePoint> act(std::size_t g, const NervePoint& p) const;
  /// In-window g with g.v = v.
  std::vector<std::size_t> stabilizer(std::size_t v) const;

  /// Identity, compatibility with multiplication, injectivity on vertices,
  /// and facets mapped to simplices.
  ValidationReport validate() const;

 private:
  ComplexPtr complex_;
  GroupPtr group_;
  std::vector<std::size_t> table_;
};

using SimplicialActionPtr = std::shared_ptr<const SimplicialAction>;

/// g.[U] = [V] for the unique set V with y in U <=> g.y in V for every y
/// whose image stays in the window; kOutside when no unique match exists.
SimplicialAction induced_cover_action(const Cover& cover, const ProductWindow& gx, ComplexPtr nerve);

/// Fatness: the first point y with d(y, U^c) < R for every set U, if any.
std::optional<std::size_t> first_unfat_point(const Cover& cover, const Rational& R);

/// psi_U(y) = d(y, U^c) / sum_V d(y, V^c). Sets equal to the whole space share
/// the weight equally. Throws Error(ZeroDenominator) if no set contains y.
NervePoint psi_map(const Cover& cover, std::size_t y);
std::vector<NervePoint> psi_all(const Cover& cover, unsigned jobs = 1);

/// psi(g.y) = g.psi(y) on every in-window pair.
ValidationReport check_psi_equivariance(const Cover& cover, const ProductWindow& gx, const SimplicialAction& action);

struct PsiLipschitzReport {
  ValidationReport report;
  Rational bound;                          // 2(N+1)(2N+3)/R
  Rational coordinate_bound;               // (2N+3)/R
  std::optional<Rational> sharpest;        // max d1 / d_G over certified pairs with g != h
  std::optional<Rational> sharpest_coordinate;
  std::size_t pairs = 0;
  std::size_t skipped = 0;                 // pairs with uncertified d_G
};

/// d1(psi(g,x), psi(h,x)) <= 2(N+1)(2N+3)/R d_G(g,h) on certified pairs, and
/// |psi_U(y) - psi_U(y')| <= (2N+3)/R d(y,y') on all pairs. Throws
/// Error(PreconditionFailed) if multiplicity exceeds N+1 or some point is not R-fat.
PsiLipschitzReport verify_psi_lipschitz(const Cover& cover, const ProductWindow& gx, const WordMetricTable& norms,
                                        std::size_t N, const Rational& R, unsigned jobs = 1);

struct EquivariantMapWindow {
  ActionPtr domain;
  SimplicialActionPtr target;
  std::vector<NervePoint> f;  // indexed by domain points
  Rational epsilon;
  NormTablePtr norms;
};

struct EquivarianceReport {
  ValidationReport global;
  ValidationReport generators;
  std::optional<Rational> sharpest;  // max d1(f(gx), g f(x)) / ||g|| over certified g != e

  Verdict global_verdict() const { return global.verdict(); }
  Verdict generator_verdict() const { return generators.verdict(); }
};

/// d1(f(gx), g f(x)) <= eps ||g|| over certified g (uncertified g make the
/// global verdict Uncertified), and d1(f(sx), s f(x)) <= eps W(s) over generators.
EquivarianceReport check_equivariance_up_to(const EquivariantMapWindow& f);

struct PhiTable {
  std::size_t x = 0;
  std::vector<NervePoint> values;  // indexed by group element
  ValidationReport report;         // eps-Lipschitz check on certified pairs
  std::optional<Rational> sharpest;
  std::size_t skipped = 0;
};

/// phi_x(g) = g f(g^{-1} x). Throws Error(Uncertified) if some entry leaves the window.
PhiTable phi_map(const EquivariantMapWindow& f, std::size_t x);

/// {g : phi(g)_v != 0}.
std::vector<std::size_t> star_pullback(const PhiTable& phi, std::size_t v);

struct PullbackCertificate {
  std::vector<std::size_t> pullback;
  /// (v_i, g_{v,i}) for every image vertex v_i with some in-window g.v_i = v.
  std::vector<std::pair<std::size_t, std::size_t>> representatives;
  ValidationReport report;
};

/// Checks star_pullback(phi, v) lies in the union of g_{v,i} Stab(v_i) over
/// the vertices v_i of the image subcomplex (union of supports of f).
/// g_{v,i} is the d_W-least solution of g.v_i = v, ties broken by label.
PullbackCertificate check_star_pullback(const EquivariantMapWindow& f, const PhiTable& phi, std::size_t v);

}  // namespace coarsekit
