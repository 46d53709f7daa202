#include "coarsekit/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "coarsekit/error.hpp"

namespace coarsekit::io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InputInvalid, what); }

const Json& require(const Json& j, const char* key, std::string_view where) {
  if (!j.is_object() || !j.contains(key)) invalid(std::string(where) + ": missing \"" + key + "\"");
  return j.at(key);
}

std::string label_of(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  invalid("labels must be strings or integers, got " + j.dump());
}

std::vector<std::string> labels_of(const Json& j, std::string_view where) {
  if (!j.is_array()) invalid(std::string(where) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(label_of(e));
  return out;
}

std::int64_t integer_of(const Json& j, std::string_view where) {
  if (!j.is_number_integer()) invalid(std::string(where) + " must be an integer");
  return j.get<std::int64_t>();
}

std::size_t count_of(const Json& j, std::string_view where) {
  const auto v = integer_of(j, where);
  if (v < 0) invalid(std::string(where) + " must be >= 0");
  return static_cast<std::size_t>(v);
}

std::vector<std::vector<Rational>> matrix_of(const Json& j, std::size_t n, std::string_view where) {
  if (!j.is_array() || j.size() != n) invalid(std::string(where) + " must be an n x n array");
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) invalid(std::string(where) + " must be an n x n array");
    for (std::size_t k = 0; k < n; ++k) out[i][k] = rational_from(j[i][k]);
  }
  return out;
}

std::vector<std::size_t> indices_of(const FiniteMetricSpace& X, const Json& members, std::string_view where) {
  std::vector<std::size_t> out;
  for (const auto& l : labels_of(members, where)) out.push_back(X.require_index(l));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Json labels_to(const FiniteMetricSpace& X, const std::vector<std::size_t>& members) {
  Json out = Json::array();
  for (auto i : members) out.push_back(X.label(i));
  return out;
}

std::vector<std::int64_t> int_list(const Json& j, std::string_view where) {
  if (!j.is_array()) invalid(std::string(where) + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& e : j) out.push_back(integer_of(e, where));
  return out;
}

}  // namespace

Json parse_json_text(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto cut = msg.find("; ");
    if (cut != std::string::npos) msg = msg.substr(cut + 2);
    throw Error(ErrorCode::ParseError,
                std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path + ":1:1: cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

Rational rational_from(const Json& j) {
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<std::int64_t>())));
  if (j.is_number_unsigned()) return Rational(mpz_class(std::to_string(j.get<std::uint64_t>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  invalid("expected an integer or a \"p/q\" string, got " + j.dump());
}

Json rational_to(const Rational& q) { return to_string(q); }

// ---------------------------------------------------------------------------

SpacePtr parse_space(const Json& j) {
  if (!j.is_object()) invalid("space must be a JSON object");
  if (j.contains("builtin")) {
    const auto kind = j.at("builtin").get<std::string>();
    if (kind == "path") {
      return std::make_shared<const FiniteMetricSpace>(
          path_space(count_of(require(j, "n", "path space"), "n"), j.value("id", std::string("P"))));
    }
    if (kind == "integers") {
      return std::make_shared<const FiniteMetricSpace>(integer_interval(integer_of(require(j, "lo", "integers"), "lo"),
                                                                        integer_of(require(j, "hi", "integers"), "hi"),
                                                                        j.value("id", std::string("Z"))));
    }
    if (kind == "grid") {
      return std::make_shared<const FiniteMetricSpace>(lattice_box(int_list(require(j, "lo", "grid"), "lo"),
                                                                   int_list(require(j, "hi", "grid"), "hi"),
                                                                   j.value("id", std::string("Zd"))));
    }
    invalid("unknown builtin space '" + kind + "'");
  }
  auto points = labels_of(require(j, "points", "space"), "points");
  const auto id = j.value("id", std::string("X"));
  if (j.contains("edges")) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) index[points[i]] = i;
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) invalid("edges must be [a, b, w] triples");
      const auto a = index.find(label_of(e[0]));
      const auto b = index.find(label_of(e[1]));
      if (a == index.end() || b == index.end()) invalid("edge uses an unknown point: " + e.dump());
      edges.emplace_back(a->second, b->second, rational_from(e[2]));
    }
    return std::make_shared<const FiniteMetricSpace>(shortest_path_space(id, std::move(points), edges));
  }
  const auto dist = matrix_of(require(j, "dist", "space"), points.size(), "dist");
  return std::make_shared<const FiniteMetricSpace>(id, std::move(points), dist);
}

Json space_to_json(const FiniteMetricSpace& space) {
  Json dist = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < space.size(); ++k) row.push_back(rational_to(space.distance(i, k)));
    dist.push_back(std::move(row));
  }
  return Json{{"id", space.id()}, {"points", space.labels()}, {"dist", std::move(dist)}};
}

std::vector<SpacePtr> parse_family(const Json& j) {
  if (!j.is_array()) return {parse_space(j)};
  if (j.empty()) invalid("family must be nonempty");
  std::vector<SpacePtr> out;
  for (const auto& e : j) {
    if (e.is_object() && e.contains("parent")) {
      const auto parent_id = label_of(e.at("parent"));
      const auto it = std::find_if(out.begin(), out.end(), [&](const SpacePtr& s) { return s->id() == parent_id; });
      if (it == out.end()) invalid("subspace parent '" + parent_id + "' must be listed earlier in the family");
      const auto& P = **it;
      const auto members = indices_of(P, require(e, "members", "subspace"), "members");
      if (members.empty()) invalid("subspace must be nonempty");
      std::vector<std::string> labels;
      std::vector<std::int64_t> ticks;
      for (auto a : members) {
        labels.push_back(P.label(a));
        for (auto b : members) ticks.push_back(P.ticks(a, b));
      }
      const auto id = e.value("id", parent_id + "/" + std::to_string(out.size()));
      out.push_back(std::make_shared<const FiniteMetricSpace>(
          FiniteMetricSpace::from_ticks(id, std::move(labels), P.denominator(), std::move(ticks))));
    } else {
      out.push_back(parse_space(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

GroupPtr parse_window(const Json& j) {
  if (!j.is_object()) invalid("window must be a JSON object");
  if (j.contains("builtin")) {
    const auto kind = j.at("builtin").get<std::string>();
    auto radius = [&] { return integer_of(require(j, "radius", kind), "radius"); };
    if (kind == "Z" || kind.rfind("Z^", 0) == 0) {
      const std::size_t dim = kind == "Z" ? 1 : static_cast<std::size_t>(std::stoul(kind.substr(2)));
      if (j.contains("generators")) {
        if (dim != 1) invalid("explicit generators are only supported for Z");
        std::vector<std::pair<std::int64_t, Rational>> gens;
        for (const auto& g : j.at("generators")) {
          if (!g.is_array() || g.size() != 2) invalid("generators must be [step, weight] pairs");
          gens.emplace_back(integer_of(g[0], "step"), rational_from(g[1]));
        }
        return std::make_shared<const GroupWindow>(integer_window_with_generators(radius(), gens));
      }
      std::vector<Rational> weights;
      if (j.contains("weights")) {
        for (const auto& w : j.at("weights")) weights.push_back(rational_from(w));
      }
      return std::make_shared<const GroupWindow>(integer_lattice_window(dim, radius(), weights));
    }
    if (kind.rfind("Z/", 0) == 0) return std::make_shared<const GroupWindow>(cyclic_group(std::stoul(kind.substr(2))));
    if (kind.rfind("F", 0) == 0 && kind.size() > 1) {
      return std::make_shared<const GroupWindow>(
          free_group_ball(std::stoul(kind.substr(1)), static_cast<std::size_t>(radius())));
    }
    if (kind.rfind("D", 0) == 0 && kind.size() > 1) {
      const auto digits = kind.substr(kind[1] == '_' ? 2 : 1);
      return std::make_shared<const GroupWindow>(dihedral_group(std::stoul(digits)));
    }
    if (kind == "Heisenberg") {
      const auto r = radius();
      return std::make_shared<const GroupWindow>(heisenberg_window(r, j.value("central_radius", r * r)));
    }
    invalid("unknown builtin window '" + kind + "'");
  }
  const auto elements = labels_of(require(j, "elements", "window"), "elements");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = i;
  auto find = [&](const Json& l) {
    const auto it = index.find(label_of(l));
    if (it == index.end()) invalid("unknown group element " + l.dump());
    return it->second;
  };
  const std::size_t n = elements.size();
  const auto& mult = require(j, "mult", "window");
  if (!mult.is_array() || mult.size() != n) invalid("mult must be an n x n array");
  std::vector<std::size_t> table(n * n, kOutside);
  for (std::size_t g = 0; g < n; ++g) {
    if (!mult[g].is_array() || mult[g].size() != n) invalid("mult must be an n x n array");
    for (std::size_t h = 0; h < n; ++h) {
      if (!mult[g][h].is_null()) table[g * n + h] = find(mult[g][h]);
    }
  }
  std::vector<std::size_t> inv;
  for (const auto& l : require(j, "inv", "window")) inv.push_back(find(l));
  std::vector<Generator> gens;
  for (const auto& s : require(j, "gens", "window")) gens.push_back({find(require(s, "s", "generator")), rational_from(require(s, "w", "generator"))});
  return std::make_shared<const GroupWindow>(elements, find(require(j, "identity", "window")), std::move(table),
                                             std::move(inv), std::move(gens));
}

ActionPtr parse_action(const Json& j) {
  auto group = parse_window(require(j, "window", "action"));
  const auto& spec = require(j, "action", "action");
  if (spec.is_string()) {
    const auto kind = spec.get<std::string>();
    if (kind == "regular") return std::make_shared<const ActionWindow>(regular_action(group));
    if (kind == "trivial") {
      return std::make_shared<const ActionWindow>(trivial_action(group, labels_of(require(j, "X", "action"), "X")));
    }
    if (kind == "rotation") {
      const auto X = labels_of(require(j, "X", "action"), "X");
      for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i] != std::to_string(i)) invalid("rotation action needs X = [\"0\", ..., \"n-1\"]");
      }
      return std::make_shared<const ActionWindow>(rotation_action(group, X.size()));
    }
    invalid("unknown action '" + kind + "'");
  }
  auto X = labels_of(require(j, "X", "action"), "X");
  std::map<std::string, std::size_t> xi;
  for (std::size_t i = 0; i < X.size(); ++i) xi[X[i]] = i;
  std::vector<std::size_t> table(group->size() * X.size(), kOutside);
  if (!spec.is_object()) invalid("action must be an object {\"g,x\": \"y\"} or a builtin name");
  for (const auto& [key, value] : spec.items()) {
    const auto comma = key.rfind(',');
    if (comma == std::string::npos) invalid("action key '" + key + "' must look like g,x");
    const auto g = group->require_index(key.substr(0, comma));
    const auto x = xi.find(key.substr(comma + 1));
    const auto y = xi.find(label_of(value));
    if (x == xi.end() || y == xi.end()) invalid("action entry '" + key + "' uses an unknown point");
    table[g * X.size() + x->second] = y->second;
  }
  return std::make_shared<const ActionWindow>(group, std::move(X), std::move(table));
}

GXInput parse_gx(const Json& j) {
  GXInput out;
  const auto action = parse_action(j);
  out.gx = std::make_shared<const ProductWindow>(action);
  const auto& G = action->group_ptr();
  const Rational radius = j.contains("norm_radius") ? rational_from(j.at("norm_radius")) : default_norm_radius(G);
  out.norms = std::make_shared<const WordMetricTable>(word_norms(G, radius));
  const auto& m = require(j, "metric_GX", "G x X input");
  if (m.is_object()) {
    const auto& p = require(m, "product", "metric_GX");
    const auto dG = window_path_metric(*G);
    const FiniteMetricSpace dX("X", action->points(), matrix_of(require(p, "X_dist", "product"), action->point_count(), "X_dist"));
    out.metric = std::make_shared<const FiniteMetricSpace>(
        product_sum_metric(*out.gx, dG, dX, rational_from(require(p, "lambda", "product"))));
  } else {
    out.metric = std::make_shared<const FiniteMetricSpace>("GxX", out.gx->labels(),
                                                           matrix_of(m, out.gx->size(), "metric_GX"));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Piece> pieces_of(const Json& list, const std::vector<SpacePtr>& family, std::size_t default_space,
                             std::string_view prefix) {
  std::vector<Piece> out;
  if (!list.is_array()) invalid("pieces must be an array");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& e = list[k];
    std::size_t s = default_space;
    if (e.contains("space")) {
      const auto id = label_of(e.at("space"));
      const auto it = std::find_if(family.begin(), family.end(), [&](const SpacePtr& p) { return p->id() == id; });
      if (it == family.end()) invalid("piece refers to unknown space '" + id + "'");
      s = static_cast<std::size_t>(it - family.begin());
    }
    Piece p;
    p.space = s;
    p.color = count_of(require(e, "color", "piece"), "color");
    p.members = indices_of(*family[s], require(e, "members", "piece"), "members");
    p.name = e.contains("name") ? label_of(e.at("name")) : std::string(prefix) + std::to_string(k);
    out.push_back(std::move(p));
  }
  return out;
}

Json pieces_to(const std::vector<Piece>& pieces, const std::vector<SpacePtr>& family) {
  Json out = Json::array();
  for (const auto& p : pieces) {
    const auto& X = *family[p.space];
    out.push_back(Json{{"name", p.name}, {"space", X.id()}, {"color", p.color}, {"members", labels_to(X, p.members)}});
  }
  return out;
}

}  // namespace

DecompositionCertificate parse_certificate(const Json& j) {
  DecompositionCertificate cert;
  cert.family = parse_family(require(j, "family", "certificate"));
  cert.r = rational_from(require(j, "r", "certificate"));
  cert.n = count_of(require(j, "n", "certificate"), "n");
  cert.depth = j.contains("depth") ? count_of(j.at("depth"), "depth") : 1;
  cert.pieces = pieces_of(require(j, "pieces", "certificate"), cert.family, 0, "p");
  const auto& w = require(j, "witness", "certificate");
  const auto type = require(w, "type", "witness").get<std::string>();
  if (type == "bounded") {
    cert.witness = BoundedWitness{rational_from(require(w, "D", "witness"))};
  } else if (type == "cover") {
    CoverWitness cw;
    cw.m = count_of(require(w, "m", "witness"), "m");
    cw.D = rational_from(require(w, "D", "witness"));
    cw.colors = w.contains("colors") ? count_of(w.at("colors"), "colors") : cw.m + 1;
    cw.depth = w.contains("depth") ? count_of(w.at("depth"), "depth") : 1;
    cw.scale = w.contains("scale") ? rational_from(w.at("scale")) : cert.r;
    cw.covers.assign(cert.pieces.size(), {});
    for (const auto& c : require(w, "covers", "witness")) {
      const auto name = label_of(require(c, "piece", "cover"));
      const auto it = std::find_if(cert.pieces.begin(), cert.pieces.end(), [&](const Piece& p) { return p.name == name; });
      if (it == cert.pieces.end()) invalid("cover refers to unknown piece '" + name + "'");
      const auto idx = static_cast<std::size_t>(it - cert.pieces.begin());
      cw.covers[idx] = pieces_of(require(c, "sets", "cover"), cert.family, it->space, "u");
      for (auto& q : cw.covers[idx]) {
        if (q.space != it->space) invalid("cover sets must live in their piece's space");
      }
    }
    cert.witness = std::move(cw);
  } else {
    invalid("unknown witness type '" + type + "'");
  }
  return cert;
}

Json certificate_to_json(const DecompositionCertificate& cert, const Json& family) {
  Json out{{"family", family}, {"r", rational_to(cert.r)}, {"n", cert.n}, {"depth", cert.depth},
           {"pieces", pieces_to(cert.pieces, cert.family)}};
  if (const auto* b = std::get_if<BoundedWitness>(&cert.witness)) {
    out["witness"] = Json{{"type", "bounded"}, {"D", rational_to(b->D)}};
  } else {
    const auto& cw = std::get<CoverWitness>(cert.witness);
    Json covers = Json::array();
    for (std::size_t i = 0; i < cert.pieces.size(); ++i) {
      covers.push_back(Json{{"piece", cert.pieces[i].name}, {"sets", pieces_to(cw.covers[i], cert.family)}});
    }
    out["witness"] = Json{{"type", "cover"},   {"m", cw.m},     {"colors", cw.colors},
                          {"depth", cw.depth}, {"D", rational_to(cw.D)}, {"scale", rational_to(cw.scale)},
                          {"covers", covers}};
  }
  return out;
}

Cover parse_cover(const Json& j, SpacePtr space) {
  std::vector<CoverSet> sets;
  const auto& list = require(j, "sets", "cover");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& e = list[k];
    sets.push_back({e.contains("name") ? label_of(e.at("name")) : "U" + std::to_string(k),
                    indices_of(*space, require(e, "members", "cover set"), "members")});
  }
  return Cover(std::move(space), std::move(sets));
}

Json cover_to_json(const Cover& cover) {
  Json sets = Json::array();
  for (const auto& s : cover.sets()) sets.push_back(Json{{"name", s.name}, {"members", labels_to(cover.space(), s.members)}});
  return Json{{"space", cover.space().id()}, {"sets", sets}};
}

UniformComplex parse_complex(const Json& j) {
  const auto vertices = labels_of(require(j, "vertices", "complex"), "vertices");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = i;
  std::vector<std::vector<std::size_t>> simplices;
  for (const auto& s : require(j, "simplices", "complex")) {
    std::vector<std::size_t> sigma;
    for (const auto& l : labels_of(s, "simplex")) {
      const auto it = index.find(l);
      if (it == index.end()) invalid("simplex uses unknown vertex '" + l + "'");
      sigma.push_back(it->second);
    }
    simplices.push_back(std::move(sigma));
  }
  return UniformComplex(vertices, std::move(simplices));
}

Json complex_to_json(const UniformComplex& K) {
  Json simplices = Json::array();
  for (const auto& f : K.facets()) {
    Json s = Json::array();
    for (auto v : f) s.push_back(K.label(v));
    simplices.push_back(std::move(s));
  }
  return Json{{"vertices", K.labels()}, {"simplices", simplices}, {"dimension", K.dimension()}};
}

NervePoint parse_nerve_point(const Json& j, const UniformComplex& K) {
  NervePoint p;
  const auto& coords = require(j, "coords", "nerve point");
  if (!coords.is_object()) invalid("coords must be an object");
  for (const auto& [v, c] : coords.items()) {
    const auto q = rational_from(c);
    if (q != 0) p.coords[K.require_index(v)] = q;
  }
  return p;
}

Json nerve_point_to_json(const NervePoint& p, const UniformComplex& K) {
  Json coords = Json::object();
  for (const auto& [v, c] : p.coords) coords[K.label(v)] = rational_to(c);
  return Json{{"coords", coords}};
}

SubgroupFamilyWindow parse_subgroup_family(const Json& j, GroupPtr group) {
  if (!j.is_array()) invalid("family must be an array of subgroups");
  std::vector<SubgroupFamilyWindow::Member> members;
  for (const auto& e : j) {
    SubgroupFamilyWindow::Member m;
    m.name = label_of(require(e, "name", "subgroup"));
    const auto& els = require(e, "elements", "subgroup");
    if (els.is_string() && els.get<std::string>() == "all") {
      for (std::size_t g = 0; g < group->size(); ++g) m.elements.push_back(g);
    } else {
      for (const auto& l : labels_of(els, "elements")) m.elements.push_back(group->require_index(l));
    }
    members.push_back(std::move(m));
  }
  return SubgroupFamilyWindow(std::move(group), std::move(members));
}

FCoverWindow parse_fcover(const Json& j, const ProductWindow& gx, SpacePtr metric, const SubgroupFamilyWindow& family) {
  FCoverWindow out;
  std::vector<CoverSet> sets;
  const auto& list = require(j, "sets", "F-cover");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& e = list[k];
    std::vector<std::size_t> members;
    for (const auto& l : labels_of(require(e, "members", "F-cover set"), "members")) members.push_back(gx.require_index(l));
    sets.push_back({e.contains("name") ? label_of(e.at("name")) : "U" + std::to_string(k), std::move(members)});
    out.assigned.push_back(family.require_index(label_of(require(e, "F", "F-cover set"))));
  }
  out.cover = std::make_shared<const Cover>(std::move(metric), std::move(sets));
  return out;
}

Json report_to_json(const ValidationReport& report) {
  Json findings = Json::array();
  for (const auto& f : report.findings()) {
    findings.push_back(Json{{"severity", std::string(to_string(f.severity))},
                            {"rule", f.rule},
                            {"message", f.message},
                            {"witness", f.witness}});
  }
  return Json{{"verdict", std::string(to_string(report.verdict()))},
              {"violations", report.count(Severity::Violation)},
              {"warnings", report.count(Severity::Warning)},
              {"uncertified", report.count(Severity::Uncertified)},
              {"findings", findings}};
}

}  // namespace coarsekit::io
