#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coarsekit/decomposition.hpp"

namespace coarsekit {

struct BoostResult {
  /// Colors 0..n+k+1, depth k+2, scale r, bounded witness D + 2r per step.
  DecompositionCertificate cert;
  /// Verification of the output. New-color pairs at distance exactly r are
  /// warnings ("boost.boundary"), not violations.
  ValidationReport report;
  std::size_t boundary_pairs = 0;
};

/// One multiplicity-boosting step. The input is read at scale 3r (r = input.r / 3)
/// with depth k+1 = input.depth. Old pieces become their open r-neighborhoods;
/// the new color collects the points x lying in exactly k+1 neighborhoods,
/// grouped by (colors, pieces) and named "(I;J)". Throws Error(InputInvalid)
/// when the input fails verification or has no bounded witness.
BoostResult kolmogorov_step(const DecompositionCertificate& input, unsigned jobs = 1);

/// Applies k steps along the schedule cert.r, cert.r/3, ..., cert.r/3^k.
/// k = 0 returns the verified input. Throws Error(ScheduleUnderflow) for k < 0.
BoostResult boost_to_depth(const DecompositionCertificate& cert, std::int64_t k, unsigned jobs = 1);

struct CombineResult {
  /// Colors 0..m+n, bounded witness D, scale r.
  DecompositionCertificate cert;
  ValidationReport report;
};

/// V_i = union over pieces j of color i of the color-i class of the cover
/// on piece j. Preconditions (checked, Error(InputInvalid) naming the first
/// failure): boosted has colors 0..m+n and depth >= m+1; covers[j] splits
/// piece j into colors 0..m+n, each class r-disjoint with diameter <= D,
/// every point of the piece in >= n+1 classes.
CombineResult combine_cover(const DecompositionCertificate& boosted, std::size_t m, std::size_t n,
                            const std::vector<std::vector<Piece>>& covers, const Rational& D, unsigned jobs = 1);

}  // namespace coarsekit
