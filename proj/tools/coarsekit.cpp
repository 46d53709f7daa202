#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coarsekit/action.hpp"
#include "coarsekit/amenability.hpp"
#include "coarsekit/boosting.hpp"
#include "coarsekit/decomposition.hpp"
#include "coarsekit/error.hpp"
#include "coarsekit/group.hpp"
#include "coarsekit/io.hpp"
#include "coarsekit/metric.hpp"
#include "coarsekit/nerve.hpp"

using namespace coarsekit;
using io::Json;

namespace {

struct Options {
  bool json = false;
  unsigned jobs = 1;
  std::string input;
  std::string out;
  std::string space;
  std::string cover;
  std::string point;
  std::string kind;
  std::string scale;
  std::string diameter;
  std::string epsilon;
  std::string radius;
  std::size_t colors = 1;
  std::int64_t depth = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = SearchOptions{}.node_budget;
  bool pullback = false;
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return 0;
    case Verdict::Fail:
      return 1;
    case Verdict::Uncertified:
      return 3;
  }
  return 1;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Uncertified:
    case ErrorCode::WindowTooSmall:
    case ErrorCode::Timeout:
      return 3;
    case ErrorCode::PreconditionFailed:
      return 1;
    default:
      return 2;
  }
}

Rational rational_flag(const std::string& text, const char* name) {
  if (text.empty()) throw Error(ErrorCode::InputInvalid, std::string("missing --") + name);
  return parse_rational(text);
}

void emit(const Options& o, const Json& j, const std::string& text) {
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InputInvalid, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

std::string report_text(const ValidationReport& r) {
  std::string out = r.summary();
  if (!out.empty() && out.back() != '\n') out += '\n';
  return out;
}

int finish(const Options& o, const ValidationReport& report, Json extra = Json::object(), std::string head = {}) {
  Json j = std::move(extra);
  j["report"] = io::report_to_json(report);
  emit(o, j, head + report_text(report));
  return exit_code(report.verdict());
}

// --- validate ---------------------------------------------------------------

std::string detect_kind(const Json& j) {
  if (j.is_array()) return "family";
  if (j.contains("metric_GX")) return "gx";
  if (j.contains("window") && j.contains("action")) return "action";
  if (j.contains("vertices")) return "complex";
  if (j.contains("pieces")) return "certificate";
  if (j.contains("elements") || j.contains("mult")) return "window";
  if (j.contains("builtin")) {
    const auto b = j.at("builtin").get<std::string>();
    return b == "path" || b == "integers" || b == "grid" ? "family" : "window";
  }
  return "family";
}

int cmd_validate(const Options& o) {
  const auto j = io::read_json_file(o.input);
  const auto kind = o.kind.empty() ? detect_kind(j) : o.kind;
  ValidationReport report;
  if (kind == "family" || kind == "space") {
    for (const auto& X : io::parse_family(j)) report.merge(validate_metric(*X, o.jobs), X->id() + ".");
  } else if (kind == "window") {
    report = io::parse_window(j)->validate();
  } else if (kind == "action") {
    const auto a = io::parse_action(j);
    report.merge(a->group().validate(), "window.");
    report.merge(a->validate());
  } else if (kind == "gx") {
    const auto in = io::parse_gx(j);
    report.merge(in.gx->group().validate(), "window.");
    report.merge(in.gx->action().validate());
    report.merge(validate_product_metric(*in.gx, *in.metric, *in.norms, o.jobs));
  } else if (kind == "complex") {
    io::parse_complex(j);
  } else if (kind == "certificate") {
    report = verify_certificate(io::parse_certificate(j), o.jobs);
  } else {
    throw Error(ErrorCode::InputInvalid, "unknown --kind '" + kind + "'");
  }
  return finish(o, report, Json{{"kind", kind}}, "kind: " + kind + "\n");
}

// --- decompositions -----------------------------------------------------------

Json cert_json(const DecompositionCertificate& cert, const Json& family_json) {
  return io::certificate_to_json(cert, family_json);
}

std::string cert_text(const DecompositionCertificate& cert) {
  return "pieces: " + std::to_string(cert.pieces.size()) + "\ncolors: 0.." + std::to_string(cert.n) +
         "\ndepth: " + std::to_string(cert.depth) + "\nr: " + to_string(cert.r) + "\nD: " + to_string(cert.bound()) + "\n";
}

int emit_cert(const Options& o, const DecompositionCertificate& cert, const Json& family, const ValidationReport& report,
              Json extra = Json::object()) {
  const auto cj = cert_json(cert, family);
  if (!o.out.empty()) write_file(o.out, cj);
  extra["certificate"] = cj;
  return finish(o, report, std::move(extra), cert_text(cert));
}

int cmd_decompose(const Options& o) {
  const auto j = io::read_json_file(o.input);
  const auto family = io::parse_family(j);
  if (family.size() != 1) throw Error(ErrorCode::InputInvalid, "decompose takes a single space");
  SearchOptions so;
  so.node_budget = o.budget;
  so.seed = o.seed;
  const auto result = search_decomposition(family[0], rational_flag(o.scale, "scale"), o.colors,
                                           rational_flag(o.diameter, "diameter"), so);
  if (!result.certificate) {
    Json out{{"found", false}, {"nodes", result.nodes}};
    emit(o, out, "not found after exhaustive search (" + std::to_string(result.nodes) + " nodes)\n");
    return 1;
  }
  Json fam = j.is_array() ? j : Json::array({j});
  return emit_cert(o, *result.certificate, fam, verify_certificate(*result.certificate, o.jobs),
                   Json{{"found", true}, {"nodes", result.nodes}});
}

int cmd_verify(const Options& o) {
  const auto cert = io::parse_certificate(io::read_json_file(o.input));
  const auto report = verify_certificate(cert, o.jobs);
  return finish(o, report, Json::object(), report.ok() ? "certificate valid\n" : "certificate INVALID\n");
}

int cmd_boost(const Options& o) {
  const auto j = io::read_json_file(o.input);
  const auto cert = io::parse_certificate(j);
  const auto pre = verify_certificate(cert, o.jobs);
  if (!pre.ok()) return finish(o, pre, Json::object(), "input certificate INVALID\n");
  const auto result = boost_to_depth(cert, o.depth, o.jobs);
  return emit_cert(o, result.cert, j.at("family"), result.report, Json{{"boundary_pairs", result.boundary_pairs}});
}

int cmd_combine(const Options& o) {
  const auto j = io::read_json_file(o.input);
  const auto cert = io::parse_certificate(j);
  const auto* cw = std::get_if<CoverWitness>(&cert.witness);
  if (!cw) throw Error(ErrorCode::InputInvalid, "combine needs a certificate with a cover witness");
  if (cw->m > cert.n) throw Error(ErrorCode::InputInvalid, "witness m exceeds the number of colors");
  const auto result = combine_cover(cert, cw->m, cert.n - cw->m, cw->covers, cw->D, o.jobs);
  return emit_cert(o, result.cert, j.at("family"), result.report);
}

// --- covers and nerves ----------------------------------------------------------

struct SpaceInput {
  SpacePtr space;
  std::optional<io::GXInput> gx;
};

SpaceInput load_space(const std::string& path) {
  const auto j = io::read_json_file(path);
  if (j.is_object() && j.contains("metric_GX")) {
    auto gx = io::parse_gx(j);
    return {gx.metric, gx};
  }
  return {io::parse_space(j), std::nullopt};
}

int cmd_nerve(const Options& o) {
  const auto s = load_space(o.space);
  const auto cover = io::parse_cover(io::read_json_file(o.cover), s.space);
  const auto K = nerve_of_cover(cover);
  const auto stats = cover_stats(cover, {}, o.jobs);
  ValidationReport report = cover.validate();
  Json j{{"complex", io::complex_to_json(K)},
         {"multiplicity", stats.multiplicity},
         {"lebesgue", to_string(stats.lebesgue)},
         {"mesh", io::rational_to(stats.mesh)}};
  const std::string text = "vertices: " + std::to_string(K.vertex_count()) + "\nmaximal simplices: " +
                           std::to_string(K.facets().size()) + "\ndimension: " + std::to_string(K.dimension()) +
                           "\nmultiplicity: " + std::to_string(stats.multiplicity) + "\nlebesgue: " +
                           to_string(stats.lebesgue) + "\nmesh: " + to_string(stats.mesh) + "\n";
  return finish(o, report, std::move(j), text);
}

int cmd_psi(const Options& o) {
  const auto s = load_space(o.space);
  const auto cover = io::parse_cover(io::read_json_file(o.cover), s.space);
  const auto K = nerve_of_cover(cover);
  const auto y = s.space->require_index(o.point);
  const auto p = psi_map(cover, y);
  const auto j = io::nerve_point_to_json(p, K);
  std::string text;
  for (const auto& [v, c] : p.coords) text += K.label(v) + " " + to_string(c) + "\n";
  emit(o, j, text);
  return 0;
}

// --- equivariance ------------------------------------------------------------------

EquivariantMapWindow load_map(const Json& j, const Options& o) {
  EquivariantMapWindow f;
  f.domain = io::parse_action(io::Json(j.at("action")));
  const auto& G = f.domain->group_ptr();
  auto K = std::make_shared<const UniformComplex>(io::parse_complex(j.at("complex")));
  const std::size_t nv = K->vertex_count();
  std::vector<std::size_t> table(G->size() * nv, kOutside);
  const auto& va = j.at("vertex_action");
  if (va.is_string() && va.get<std::string>() == "rotation") {
    for (std::size_t g = 0; g < G->size(); ++g) {
      const auto shift = std::stoll(G->label(g));
      for (std::size_t v = 0; v < nv; ++v) {
        const auto n = static_cast<std::int64_t>(nv);
        table[g * nv + v] = static_cast<std::size_t>(((static_cast<std::int64_t>(v) + shift) % n + n) % n);
      }
    }
  } else if (va.is_object()) {
    for (const auto& [key, value] : va.items()) {
      const auto comma = key.rfind(',');
      if (comma == std::string::npos) throw Error(ErrorCode::InputInvalid, "vertex_action key '" + key + "' must look like g,v");
      table[G->require_index(key.substr(0, comma)) * nv + K->require_index(key.substr(comma + 1))] =
          K->require_index(value.get<std::string>());
    }
  } else {
    throw Error(ErrorCode::InputInvalid, "vertex_action must be a table or \"rotation\"");
  }
  f.target = std::make_shared<const SimplicialAction>(K, G, std::move(table));
  const auto& fj = j.at("f");
  for (std::size_t x = 0; x < f.domain->point_count(); ++x) {
    const auto& label = f.domain->point(x);
    if (!fj.contains(label)) throw Error(ErrorCode::InputInvalid, "f is missing point '" + label + "'");
    f.f.push_back(io::parse_nerve_point(fj.at(label), *K));
  }
  if (!o.epsilon.empty()) {
    f.epsilon = parse_rational(o.epsilon);
  } else {
    f.epsilon = io::rational_from(j.at("epsilon"));
  }
  const Rational radius = !o.radius.empty()         ? parse_rational(o.radius)
                          : j.contains("norm_radius") ? io::rational_from(j.at("norm_radius"))
                                                      : default_norm_radius(G);
  f.norms = std::make_shared<const WordMetricTable>(word_norms(G, radius));
  return f;
}

int cmd_equivariance(const Options& o) {
  const auto j = io::read_json_file(o.input);
  const auto f = load_map(j, o);
  ValidationReport report;
  report.merge(f.target->validate(), "vertex_action.");
  for (std::size_t x = 0; x < f.f.size(); ++x) report.merge(validate_point(f.target->complex(), f.f[x]), "f.");
  const auto eq = check_equivariance_up_to(f);
  report.merge(eq.global);
  Json out{{"global", std::string(to_string(eq.global_verdict()))},
           {"generators", std::string(to_string(eq.generator_verdict()))},
           {"generator_report", io::report_to_json(eq.generators)}};
  if (eq.sharpest) out["sharpest"] = io::rational_to(*eq.sharpest);
  std::string text = "global: " + std::string(to_string(eq.global_verdict())) +
                     "\ngenerators: " + std::string(to_string(eq.generator_verdict())) + "\n";
  if (o.pullback && report.ok()) {
    Json pb = Json::array();
    const auto& K = f.target->complex();
    for (std::size_t x = 0; x < f.f.size(); ++x) {
      const auto phi = phi_map(f, x);
      report.merge(phi.report, "phi.");
      for (std::size_t v = 0; v < K.vertex_count(); ++v) {
        const auto cert = check_star_pullback(f, phi, v);
        report.merge(cert.report, "pullback.");
        Json members = Json::array();
        for (auto g : cert.pullback) members.push_back(f.domain->group().label(g));
        pb.push_back(Json{{"x", f.domain->point(x)}, {"vertex", K.label(v)}, {"pullback", members}});
      }
    }
    out["pullbacks"] = pb;
    text += "star pullbacks checked: " + std::to_string(pb.size()) + "\n";
  }
  return finish(o, report, std::move(out), text);
}

int cmd_wordmetric(const Options& o) {
  const auto G = io::parse_window(io::read_json_file(o.input));
  const Rational radius = o.radius.empty() ? default_norm_radius(G) : parse_rational(o.radius);
  const auto table = word_norms(G, radius);
  ValidationReport report;
  report.merge(G->validate(), "window.");
  report.merge(check_left_invariance(table));
  Json norms = Json::object();
  std::string text = "radius: " + to_string(radius) + "\ncertified: " + std::to_string(table.certified_count()) + "/" +
                     std::to_string(G->size()) + "\n";
  for (std::size_t g = 0; g < G->size(); ++g) {
    if (table.certified(g)) {
      norms[G->label(g)] = io::rational_to(table.norm(g));
      text += G->label(g) + " " + to_string(table.norm(g)) + "\n";
    }
  }
  return finish(o, report, Json{{"radius", io::rational_to(radius)}, {"norms", norms}}, text);
}

// --- amenability -----------------------------------------------------------------

struct AmenableInput {
  io::GXInput gx;
  std::optional<SubgroupFamilyWindow> family;
  FCoverWindow fc;
  std::vector<std::size_t> S;
  std::size_t N = 0;
  Json cover_json;
};

AmenableInput load_amenable(const Options& o) {
  AmenableInput in;
  const auto gj = io::read_json_file(o.space);
  in.gx = io::parse_gx(gj);
  in.cover_json = o.cover.empty() ? gj.at("cover") : io::read_json_file(o.cover);
  const auto& cj = in.cover_json;
  in.family.emplace(io::parse_subgroup_family(cj.at("family"), in.gx.gx->action().group_ptr()));
  in.fc = io::parse_fcover(cj, *in.gx.gx, in.gx.metric, *in.family);
  const auto& G = in.gx.gx->group();
  for (const auto& s : cj.at("S")) in.S.push_back(G.require_index(s.get<std::string>()));
  in.N = cj.at("N").get<std::size_t>();
  return in;
}

int cmd_amenable_check(const Options& o) {
  const auto in = load_amenable(o);
  return finish(o, check_N_F_amenable(*in.gx.gx, *in.family, in.fc, in.S, in.N));
}

int cmd_amenable_pipeline(const Options& o) {
  const auto in = load_amenable(o);
  const Rational eps = !o.epsilon.empty() ? parse_rational(o.epsilon) : io::rational_from(in.cover_json.at("epsilon"));
  const auto result = run_amenable_pipeline(in.gx.gx, in.gx.norms, *in.family, in.fc, eps, in.N, in.S, o.jobs);
  const auto& K = *result.E;
  const auto& X = in.gx.gx->action();
  const auto& G = in.gx.gx->group();
  Json f = Json::object();
  for (std::size_t x = 0; x < X.point_count(); ++x) f[X.point(x)] = io::nerve_point_to_json(result.f.f[x], K);
  Json stab = Json::object();
  for (std::size_t v = 0; v < K.vertex_count(); ++v) {
    Json s = Json::array();
    for (auto g : result.stabilizers[v]) s.push_back(G.label(g));
    stab[K.label(v)] = s;
  }
  Json out{{"complex", io::complex_to_json(K)},
           {"R", to_string(result.R)},
           {"f", f},
           {"stabilizers", stab},
           {"fcover", io::report_to_json(result.fcover)}};
  const std::string text = "R: " + to_string(result.R) + "\ndim E: " + std::to_string(K.dimension()) +
                           "\nF-cover check: " + std::string(to_string(result.fcover.verdict())) + "\n";
  return finish(o, result.report, std::move(out), text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarsekit: exact checks for decompositions, covers, nerves and group actions"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::function<int(const Options&)> run;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, int (*fn)(const Options&)) {
    auto* sub = parent->add_subcommand(name, help);
    sub->callback([&run, fn] { run = fn; });
    sub->add_flag("--json", o.json, "machine-readable output");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    return sub;
  };

  auto* validate = add(&app, "validate", "validate a space, family, window, action, G x X metric or certificate", cmd_validate);
  validate->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  validate->add_option("--kind", o.kind, "family|window|action|gx|complex|certificate");

  auto* decompose = add(&app, "decompose", "search for an (r,n)-decomposition with pieces of diameter <= D", cmd_decompose);
  decompose->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  decompose->add_option("--scale", o.scale, "r as p/q")->required();
  decompose->add_option("--colors", o.colors, "highest color index n (colors 0..n)")->required();
  decompose->add_option("--diameter", o.diameter, "piece diameter bound D")->required();
  decompose->add_option("--seed", o.seed, "shuffle the search order");
  decompose->add_option("--budget", o.budget, "node budget");
  decompose->add_option("--out", o.out, "write the certificate here");

  auto* verify = add(&app, "verify-cert", "verify a decomposition certificate", cmd_verify);
  verify->add_option("input", o.input)->required()->check(CLI::ExistingFile);

  auto* boost = add(&app, "boost", "raise the depth of a bounded certificate", cmd_boost);
  boost->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  boost->add_option("--depth", o.depth, "number of steps k")->required();
  boost->add_option("--out", o.out, "write the certificate here");

  auto* combine = add(&app, "combine", "combine a boosted certificate with its per-piece covers", cmd_combine);
  combine->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  combine->add_option("--out", o.out, "write the certificate here");

  auto* nerve = add(&app, "nerve", "nerve of a cover", cmd_nerve);
  nerve->add_option("--space", o.space)->required()->check(CLI::ExistingFile);
  nerve->add_option("--cover", o.cover)->required()->check(CLI::ExistingFile);

  auto* psi = add(&app, "psi", "partition-of-unity map at one point", cmd_psi);
  psi->add_option("--space", o.space)->required()->check(CLI::ExistingFile);
  psi->add_option("--cover", o.cover)->required()->check(CLI::ExistingFile);
  psi->add_option("--point", o.point)->required();

  auto* eq = add(&app, "equivariance", "check a map into a complex for equivariance up to epsilon", cmd_equivariance);
  eq->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  eq->add_option("--epsilon", o.epsilon, "overrides the map's epsilon");
  eq->add_option("--radius", o.radius, "norm certification radius");
  eq->add_flag("--pullback", o.pullback, "also check star pullbacks of every vertex");

  auto* wm = add(&app, "wordmetric", "weighted word norms on a group window", cmd_wordmetric);
  wm->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  wm->add_option("--radius", o.radius, "certification radius");

  auto amenable_opts = [&](CLI::App* sub, bool pipeline) {
    sub->add_option("--space", o.space, "G x X input")->required()->check(CLI::ExistingFile);
    sub->add_option("--cover", o.cover, "F-cover input")->check(CLI::ExistingFile);
    if (pipeline) sub->add_option("--epsilon", o.epsilon);
  };
  amenable_opts(add(&app, "amenable-check", "check an N-F-amenable cover", cmd_amenable_check), false);
  amenable_opts(add(&app, "amenable-pipeline", "nerve, map and conclusions for an F-cover", cmd_amenable_pipeline), true);
  auto* amenable = app.add_subcommand("amenable", "amenable check | pipeline");
  amenable->require_subcommand(1);
  amenable_opts(add(amenable, "check", "check an N-F-amenable cover", cmd_amenable_check), false);
  amenable_opts(add(amenable, "pipeline", "nerve, map and conclusions for an F-cover", cmd_amenable_pipeline), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(o);
  } catch (const Error& e) {
    if (o.json) {
      std::cout << Json{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}}.dump(2) << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const Json::exception& e) {
    std::cerr << "error: InputInvalid: " << e.what() << "\n";
    return 2;
  }
}
