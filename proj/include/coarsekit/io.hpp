#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coarsekit/action.hpp"
#include "coarsekit/amenability.hpp"
#include "coarsekit/boosting.hpp"
#include "coarsekit/decomposition.hpp"
#include "coarsekit/group.hpp"
#include "coarsekit/metric.hpp"
#include "coarsekit/nerve.hpp"
#include "coarsekit/report.hpp"

namespace coarsekit::io {

using Json = nlohmann::json;

/// Throws Error(ParseError) with "source:line:col: message".
Json parse_json_text(std::string_view text, std::string_view source);
Json read_json_file(const std::string& path);

/// Integers are accepted bare; every other rational as a "p/q" string.
Rational rational_from(const Json& j);
Json rational_to(const Rational& q);

/// {"id","points","dist"}, {"id","points","edges":[[a,b,w]]}, or a builtin:
/// {"builtin":"path","n"}, {"builtin":"integers","lo","hi"}, {"builtin":"grid","lo":[..],"hi":[..]}.
SpacePtr parse_space(const Json& j);
Json space_to_json(const FiniteMetricSpace& space);
/// A list of spaces and {"parent": id, "members": [..]} subspaces (materialized
/// with the restricted metric), or a single space.
std::vector<SpacePtr> parse_family(const Json& j);

/// Explicit {"elements","identity","mult","inv","gens"} or a builtin:
/// "Z^d" (radius, weights, or generators [[step, w]] for d = 1), "F<k>"
/// (radius), "Z/<n>", "D<n>" (symmetries of the n-gon), "Heisenberg"
/// (radius, central_radius).
GroupPtr parse_window(const Json& j);

/// {"window", "X", "action"}; "action" is a {"g,x": "y"} table or one of
/// "trivial", "regular", "rotation".
ActionPtr parse_action(const Json& j);

struct GXInput {
  ProductPtr gx;
  NormTablePtr norms;
  SpacePtr metric;
};

/// Action JSON plus "metric_GX" ([[..]] in G x X point order, or
/// {"product": {"lambda", "X_dist"}} with the window path metric on G) and
/// optional "norm_radius".
GXInput parse_gx(const Json& j);

DecompositionCertificate parse_certificate(const Json& j);
/// `family` is echoed verbatim as the certificate's family.
Json certificate_to_json(const DecompositionCertificate& cert, const Json& family);

/// {"sets": [{"name", "members": [labels]}]} over the given space.
Cover parse_cover(const Json& j, SpacePtr space);
Json cover_to_json(const Cover& cover);

UniformComplex parse_complex(const Json& j);
Json complex_to_json(const UniformComplex& K);
NervePoint parse_nerve_point(const Json& j, const UniformComplex& K);
Json nerve_point_to_json(const NervePoint& p, const UniformComplex& K);

SubgroupFamilyWindow parse_subgroup_family(const Json& j, GroupPtr group);
/// {"family", "sets": [{"name","members","F"}]} on the G x X metric.
FCoverWindow parse_fcover(const Json& j, const ProductWindow& gx, SpacePtr metric, const SubgroupFamilyWindow& family);

Json report_to_json(const ValidationReport& report);

}  // namespace coarsekit::io
