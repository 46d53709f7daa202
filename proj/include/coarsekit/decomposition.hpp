#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coarsekit/metric.hpp"
#include "coarsekit/rational.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit {

struct CoverSet {
  std::string name;
  std::vector<std::size_t> members;  // sorted point indices
};

/// Finite list of nonempty subsets of one space. Coverage of the whole
/// space is checked by validate(), not enforced at construction, so that
/// faulty covers can still be inspected.
class Cover {
 public:
  Cover(SpacePtr space, std::vector<CoverSet> sets);

  const FiniteMetricSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<CoverSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  /// For each point, the indices of the sets containing it (ascending).
  const std::vector<std::vector<std::size_t>>& membership() const { return membership_; }
  bool contains(std::size_t set, std::size_t point) const;

  ValidationReport validate() const;

 private:
  SpacePtr space_;
  std::vector<CoverSet> sets_;
  std::vector<std::vector<std::size_t>> membership_;
};

struct CoverStats {
  std::size_t multiplicity = 0;
  std::map<Rational, std::size_t> d_multiplicity;
  ExtendedRational lebesgue;
  Rational mesh;
};

/// Ticks from point x to the complement of set U (nullopt when U is everything).
std::optional<std::int64_t> codistance_ticks(const Cover& cover, std::size_t set, std::size_t x);

std::size_t multiplicity(const Cover& cover);
/// Max over x of the number of sets meeting the open ball B(x, d).
std::size_t d_multiplicity(const Cover& cover, const Rational& d, unsigned jobs = 1);
/// min over x of max over U containing x of d(x, U^c); infinite if some set is the whole space.
ExtendedRational lebesgue_number(const Cover& cover, unsigned jobs = 1);
Rational cover_mesh(const Cover& cover);
CoverStats cover_stats(const Cover& cover, const std::vector<Rational>& radii = {}, unsigned jobs = 1);

/// Condition (A): d-multiplicity <= n+1 for every cover, mesh of all sets <= D.
ValidationReport condition_A_report(const std::vector<Cover>& covers, const Rational& d, std::size_t n,
                                    const Rational& D, unsigned jobs = 1);
/// Condition (B): multiplicity <= n+1, Lebesgue number >= lambda, mesh <= D.
ValidationReport condition_B_report(const std::vector<Cover>& covers, const Rational& lambda, std::size_t n,
                                    const Rational& D, unsigned jobs = 1);
bool check_condition_A(const std::vector<Cover>& covers, const Rational& d, std::size_t n, const Rational& D);
bool check_condition_B(const std::vector<Cover>& covers, const Rational& lambda, std::size_t n, const Rational& D);

// ---------------------------------------------------------------------------

/// A colored piece of one family member.
struct Piece {
  std::string name;
  std::size_t space = 0;
  std::size_t color = 0;
  std::vector<std::size_t> members;  // sorted point indices
};

struct BoundedWitness {
  Rational D;
};

/// Each piece carries its own colored cover (sets as Pieces on the same
/// space): `colors` color classes, each `scale`-disjoint with diameters
/// <= D, every point of the piece in at least `depth` of them.
struct CoverWitness {
  std::size_t m = 0;
  std::size_t colors = 1;
  std::size_t depth = 1;
  Rational D;
  Rational scale;
  std::vector<std::vector<Piece>> covers;  // aligned with certificate pieces
};

struct DecompositionCertificate {
  std::vector<SpacePtr> family;
  Rational r;
  std::size_t n = 0;      // colors 0..n
  std::size_t depth = 1;  // every point lies in pieces of >= depth colors
  std::vector<Piece> pieces;
  std::variant<BoundedWitness, CoverWitness> witness;

  std::size_t colors() const { return n + 1; }
  bool bounded() const { return std::holds_alternative<BoundedWitness>(witness); }
  const Rational& bound() const;
};

struct PieceGap {
  std::size_t a = 0;
  std::size_t b = 0;
  std::int64_t ticks = 0;
};

/// Pairs of same-space, same-color pieces whose distance is not above thr.
std::vector<PieceGap> close_piece_pairs(const FiniteMetricSpace& X, const std::vector<const Piece*>& pieces,
                                       const Threshold& thr, unsigned jobs = 1);

/// Union, depth, per-color r-disjointness and the witness. Findings carry
/// space, color and piece names.
ValidationReport verify_certificate(const DecompositionCertificate& cert, unsigned jobs = 1);

/// Points of `space` lying in the open radius-neighborhood of `members`.
std::vector<std::size_t> open_neighborhood(const FiniteMetricSpace& space, const std::vector<std::size_t>& members,
                                           const Rational& radius);

struct ConditionBCovers {
  std::vector<Cover> covers;
  Rational lambda;
  std::size_t n = 0;
  Rational D;
  ValidationReport report;  // re-verification of (B) on the output
};

/// Fattens every piece by its open r/2-neighborhood. Throws
/// Error(CertificateInvalid) unless the certificate verifies with a bounded witness.
ConditionBCovers certificate_to_condB(const DecompositionCertificate& cert, unsigned jobs = 1);

// ---------------------------------------------------------------------------

struct SearchOptions {
  std::uint64_t node_budget = 2'000'000;
  std::optional<std::uint64_t> seed;  // shuffles the point order when set
};

struct SearchResult {
  std::optional<DecompositionCertificate> certificate;  // nullopt means NotFound
  std::uint64_t nodes = 0;
};

/// Depth-first search over colored partitions in point order; each point
/// joins an existing piece or opens a new one. Exhaustive unless the node
/// budget runs out, which throws Error(Timeout). Found certificates are
/// verified before being returned.
SearchResult search_decomposition(SpacePtr space, const Rational& r, std::size_t n, const Rational& D,
                                  const SearchOptions& options = {});

}  // namespace coarsekit
