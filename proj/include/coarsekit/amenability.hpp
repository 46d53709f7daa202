#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coarsekit/action.hpp"
#include "coarsekit/decomposition.hpp"
#include "coarsekit/group.hpp"
#include "coarsekit/nerve.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit {

/// Subgroups of G, each given by its intersection with the window.
class SubgroupFamilyWindow {
 public:
  struct Member {
    std::string name;
    std::vector<std::size_t> elements;  // sorted
  };

  SubgroupFamilyWindow(GroupPtr group, std::vector<Member> members);

  const GroupWindow& group() const { return *group_; }
  const std::vector<Member>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require_index(std::string_view name) const;
  bool contains(std::size_t member, std::size_t g) const;

  /// Subgroup axioms on in-window products (violations); closure under
  /// in-window conjugation (warnings), plus a caveat that closure beyond
  /// the window is not checked.
  ValidationReport validate() const;

 private:
  GroupPtr group_;
  std::vector<Member> members_;
};

/// G-invariant cover of G x X whose sets are assigned family members.
struct FCoverWindow {
  std::shared_ptr<const Cover> cover;  // on the G x X point order
  std::vector<std::size_t> assigned;   // family member per set
};

/// gU = U for g in F and gU disjoint from U for g outside F, over in-window g.
/// Uncertified when some g.u with u in U leaves the window.
ValidationReport is_F_subset(const std::vector<std::size_t>& U, const std::vector<std::size_t>& F, const ProductWindow& gx);

/// F-subsets, G-invariance of the cover, dimension (multiplicity - 1) <= N,
/// and for every x some U containing S x {x}.
ValidationReport check_N_F_amenable(const ProductWindow& gx, const SubgroupFamilyWindow& family,
                                    const FCoverWindow& cover, const std::vector<std::size_t>& S, std::size_t N);

struct PipelineResult {
  ComplexPtr E;
  SimplicialActionPtr action;
  EquivariantMapWindow f;
  ExtendedRational R;
  std::vector<std::vector<std::size_t>> stabilizers;  // per vertex of E
  EquivarianceReport equivariance;
  ValidationReport report;  // dimension, stabilizers, equivariance
  ValidationReport fcover;  // F-cover verdict, informational

  Verdict verdict() const { return report.verdict(); }
};

/// Nerve E of the cover with the induced action, f(x) = psi(e,x), and the
/// three conclusions re-verified: dim E <= N, vertex stabilizers inside the
/// assigned members, f eps-equivariant. R = (2N+2)(2N+3)/eps. Throws
/// Error(PreconditionFailed) for an invalid G x X metric or an unfat point.
PipelineResult run_amenable_pipeline(const ProductPtr& gx, const NormTablePtr& norms, const SubgroupFamilyWindow& family,
                                     const FCoverWindow& cover, const Rational& epsilon, std::size_t N,
                                     const std::vector<std::size_t>& S, unsigned jobs = 1);

}  // namespace coarsekit
