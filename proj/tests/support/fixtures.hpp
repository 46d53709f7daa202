#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "coarsekit/action.hpp"
#include "coarsekit/amenability.hpp"
#include "coarsekit/decomposition.hpp"
#include "coarsekit/group.hpp"
#include "coarsekit/nerve.hpp"

namespace fixtures {

using namespace coarsekit;

/// G x X window with a G-invariant cover, family assignment and capture set.
struct GXFixture {
  std::string name;
  ProductPtr gx;
  NormTablePtr norms;
  SpacePtr metric;
  std::shared_ptr<const Cover> cover;
  std::shared_ptr<const SubgroupFamilyWindow> family;
  FCoverWindow fc;
  std::vector<std::size_t> S;
  std::size_t N = 0;
};

/// Z/6 acting on itself; bands {x - g in {0,1,2,3}} and {x - g in {3,4,5,0}}, both stabilized by G.
GXFixture z6_bands(const Rational& lambda = 1);
/// Z/6 acting on itself; sets {g = j mod 3} and {x = j mod 3}, stabilizers {0,3}.
GXFixture z6_stabilizer(const Rational& lambda = 2);
/// Z-window [-radius, radius] acting trivially on {+,-}; d = |g-h| + c [signs differ].
GXFixture z_two_point(std::int64_t radius = 20, const Rational& c = 3);
/// Z-window acting on Z/6 by rotation with the band cover of z6_bands.
GXFixture z_rotation(std::int64_t radius = 12, const Rational& lambda = 1);

std::vector<GXFixture> gx_fixtures();

/// Cycle on n vertices "v0".."v<n-1>".
ComplexPtr hexagon(std::size_t n = 6);

/// Rotation vertex action by the group label read as an integer.
SimplicialActionPtr rotation_on(ComplexPtr K, GroupPtr G);

/// f(x) = vertex x for Z/6 acting on itself, and for a Z-window rotating Z/6.
EquivariantMapWindow z6_hexagon_map();
EquivariantMapWindow z_hexagon_map(std::int64_t radius = 9);

/// The Z-window interval certificate with blocks of length 5 at r = 3.
DecompositionCertificate zline_certificate(const Rational& r = 3);

/// Z[0,30] at scale 9, colors 0..1: [0,5], [15,23] and [6,14], [24,30].
DecompositionCertificate zline_boost_certificate();

/// Z^2 box [0,side]^2 cut into horizontal strips of `height` rows,
/// alternating colors 0 and 1, at scale r.
DecompositionCertificate z2_strips(std::int64_t side, std::int64_t height, const Rational& r);

/// For each piece, column blocks of length 12 with period 15 in `colors`
/// colors; color l has its 3-column gap shifted by 5l.
std::vector<std::vector<Piece>> column_covers(const DecompositionCertificate& cert, std::size_t colors);

}  // namespace fixtures
