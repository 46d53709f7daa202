#include "coarsekit/metric.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "coarsekit/error.hpp"
#include "coarsekit/parallel.hpp"

namespace coarsekit {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

mpz_class lcm_of_denominators(const std::vector<std::vector<Rational>>& rows) {
  mpz_class l = 1;
  for (const auto& row : rows) {
    for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  }
  return l;
}

}  // namespace

std::shared_ptr<FiniteMetricSpace::Data> FiniteMetricSpace::make_data(std::string id,
                                                                       std::vector<std::string> labels) {
  auto d = std::make_shared<Data>();
  d->id = std::move(id);
  d->labels = std::move(labels);
  d->index.reserve(d->labels.size());
  for (std::size_t i = 0; i < d->labels.size(); ++i) {
    if (!d->index.emplace(d->labels[i], i).second) {
      throw Error(ErrorCode::InputInvalid, "duplicate point label '" + d->labels[i] + "' in space '" + d->id + "'");
    }
  }
  return d;
}

FiniteMetricSpace::FiniteMetricSpace(std::string id, std::vector<std::string> points,
                                     const std::vector<std::vector<Rational>>& dist) {
  auto d = make_data(std::move(id), std::move(points));
  const std::size_t n = d->labels.size();
  if (dist.size() != n) {
    throw Error(ErrorCode::InputInvalid, "distance table of space '" + d->id + "' has " + std::to_string(dist.size()) +
                                             " rows, expected " + std::to_string(n));
  }
  for (const auto& row : dist) {
    if (row.size() != n) throw Error(ErrorCode::InputInvalid, "distance table of space '" + d->id + "' is not square");
  }
  const mpz_class l = lcm_of_denominators(dist);
  d->denominator = to_int64(l);
  d->dense.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational scaled = dist[i][j] * Rational(l);
      d->dense[i * n + j] = to_int64(scaled.get_num());
    }
  }
  data_ = std::move(d);
}

FiniteMetricSpace FiniteMetricSpace::from_ticks(std::string id, std::vector<std::string> points,
                                                std::int64_t denominator, std::vector<std::int64_t> ticks) {
  auto d = make_data(std::move(id), std::move(points));
  if (denominator <= 0) throw Error(ErrorCode::InputInvalid, "denominator must be positive");
  if (ticks.size() != d->labels.size() * d->labels.size()) {
    throw Error(ErrorCode::InputInvalid, "tick table size mismatch for space '" + d->id + "'");
  }
  d->denominator = denominator;
  d->dense = std::move(ticks);
  return FiniteMetricSpace(std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::from_function(std::string id, std::vector<std::string> points,
                                                   std::int64_t denominator, TickFunction fn) {
  auto d = make_data(std::move(id), std::move(points));
  if (denominator <= 0) throw Error(ErrorCode::InputInvalid, "denominator must be positive");
  d->denominator = denominator;
  d->fn = std::move(fn);
  return FiniteMetricSpace(std::move(d));
}

std::optional<std::size_t> FiniteMetricSpace::index_of(std::string_view label) const {
  const auto it = data_->index.find(std::string(label));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteMetricSpace::require_index(std::string_view label) const {
  if (auto i = index_of(label)) return *i;
  throw Error(ErrorCode::InputInvalid, "unknown point '" + std::string(label) + "' in space '" + id() + "'");
}

Threshold FiniteMetricSpace::threshold(const Rational& q) const {
  const Rational scaled = q * Rational(mpz_class(static_cast<long>(denominator())));
  return {floor_saturated(scaled), ceil_saturated(scaled)};
}

// ---------------------------------------------------------------------------

SubSpace::SubSpace(SpacePtr parent, std::vector<std::size_t> members, std::string id)
    : parent_(std::move(parent)), members_(std::move(members)), id_(std::move(id)) {
  if (!parent_) throw Error(ErrorCode::InputInvalid, "subspace without parent");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw Error(ErrorCode::InputInvalid, "empty subspace of '" + parent_->id() + "'");
  if (members_.back() >= parent_->size()) {
    throw Error(ErrorCode::InputInvalid, "subspace member out of range in '" + parent_->id() + "'");
  }
  if (id_.empty()) id_ = parent_->id();
}

SubSpace SubSpace::whole(SpacePtr parent) {
  std::vector<std::size_t> all(parent ? parent->size() : 0);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return SubSpace(std::move(parent), std::move(all));
}

SubSpace SubSpace::from_labels(SpacePtr parent, std::span<const std::string> labels, std::string id) {
  std::vector<std::size_t> members;
  members.reserve(labels.size());
  for (const auto& l : labels) members.push_back(parent->require_index(l));
  return SubSpace(std::move(parent), std::move(members), std::move(id));
}

bool SubSpace::contains(std::size_t point) const {
  return std::binary_search(members_.begin(), members_.end(), point);
}

MetricFamily::MetricFamily(std::vector<SubSpace> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::InputInvalid, "metric family must be nonempty");
}

std::optional<std::size_t> MetricFamily::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].id() == id) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

ValidationReport validate_metric(const FiniteMetricSpace& space, unsigned jobs) {
  ValidationReport report;
  const std::size_t n = space.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (space.ticks(p, p) != 0) {
      report.violation("identity", "d(p,p) must be 0", {space.label(p)});
    }
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto a = space.ticks(p, q);
      const auto b = space.ticks(q, p);
      if (a != b) report.violation("symmetry", "d(p,q) != d(q,p)", {space.label(p), space.label(q)});
      if (a <= 0 || b <= 0) report.violation("positivity", "d(p,q) must be > 0 for p != q", {space.label(p), space.label(q)});
    }
  }
  // Triangle inequality d(p,r) <= d(p,q) + d(q,r), split by p across workers.
  std::size_t chunks = 0;
  std::vector<ValidationReport> parts(std::max<unsigned>(1, jobs));
  for_each_chunk(n, jobs, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& part = parts[c];
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        const __int128 pq = space.ticks(p, q);
        for (std::size_t r = 0; r < n; ++r) {
          if (static_cast<__int128>(space.ticks(p, r)) > pq + space.ticks(q, r)) {
            part.violation("triangle", "d(p,r) > d(p,q) + d(q,r)", {space.label(p), space.label(q), space.label(r)});
          }
        }
      }
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) report.merge(parts[c]);
  return report;
}

std::int64_t min_ticks(const FiniteMetricSpace& space, std::span<const std::size_t> a,
                       std::span<const std::size_t> b) {
  std::int64_t best = kUnreached;
  for (auto i : a) {
    for (auto j : b) best = std::min(best, space.ticks(i, j));
  }
  return best;
}

std::int64_t diameter_ticks(const FiniteMetricSpace& space, std::span<const std::size_t> a) {
  std::int64_t best = 0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = x + 1; y < a.size(); ++y) best = std::max(best, space.ticks(a[x], a[y]));
  }
  return best;
}

bool separated(const FiniteMetricSpace& space, std::span<const std::size_t> a, std::span<const std::size_t> b,
               const Threshold& r) {
  for (auto i : a) {
    for (auto j : b) {
      if (!r.above(space.ticks(i, j))) return false;
    }
  }
  return true;
}

namespace {

void require_same_parent(const SubSpace& a, const SubSpace& b) {
  if (a.parent_ptr() != b.parent_ptr() && a.parent().id() != b.parent().id()) {
    throw Error(ErrorCode::MismatchedParent,
                "subspaces of '" + a.parent().id() + "' and '" + b.parent().id() + "' cannot be compared");
  }
}

}  // namespace

Rational set_distance(const SubSpace& a, const SubSpace& b) {
  require_same_parent(a, b);
  return a.parent().to_rational(min_ticks(a.parent(), a.members(), b.members()));
}

bool is_r_disjoint(std::span<const SubSpace> pieces, const Rational& r) {
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) require_same_parent(pieces[i], pieces[j]);
  }
  if (pieces.empty()) return true;
  const auto& space = pieces.front().parent();
  const auto t = space.threshold(r);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (!separated(space, pieces[i].members(), pieces[j].members(), t)) return false;
    }
  }
  return true;
}

Rational diameter(const SubSpace& a) {
  return a.parent().to_rational(diameter_ticks(a.parent(), a.members()));
}

Rational mesh(const MetricFamily& family) {
  Rational best = 0;
  for (const auto& m : family.members()) best = std::max(best, diameter(m));
  return best;
}

// ---------------------------------------------------------------------------

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) throw Error(ErrorCode::InputInvalid, "control function needs at least one breakpoint");
  if (points_.front().first != 0) throw Error(ErrorCode::InputInvalid, "control function must start at t = 0");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first <= points_[i - 1].first) {
      throw Error(ErrorCode::InputInvalid, "control function breakpoints must be strictly increasing in t");
    }
  }
}

PiecewiseLinear PiecewiseLinear::linear(const Rational& slope) {
  return PiecewiseLinear({{Rational(0), Rational(0)}, {Rational(1), slope}});
}

Rational PiecewiseLinear::operator()(const Rational& t) const {
  if (points_.empty()) throw Error(ErrorCode::InputInvalid, "empty control function");
  if (points_.size() == 1) return points_.front().second;
  std::size_t seg = 0;
  while (seg + 2 < points_.size() && t > points_[seg + 1].first) ++seg;
  const auto& [t0, v0] = points_[seg];
  const auto& [t1, v1] = points_[seg + 1];
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

void PiecewiseLinear::validate(std::string_view name, ValidationReport& report) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].second < 0) {
      report.violation("control.nonnegative", std::string(name) + " takes a negative value",
                       {to_string(points_[i].first)});
    }
    if (i > 0 && points_[i].second < points_[i - 1].second) {
      report.violation("control.monotone", std::string(name) + " decreases", {to_string(points_[i].first)});
    }
  }
}

ValidationReport ControlFunctions::validate() const {
  ValidationReport report;
  delta.validate("delta", report);
  rho.validate("rho", report);
  std::vector<Rational> ts;
  for (const auto& p : delta.breakpoints()) ts.push_back(p.first);
  for (const auto& p : rho.breakpoints()) ts.push_back(p.first);
  for (const auto& t : ts) {
    if (delta(t) > rho(t)) report.violation("control.order", "delta(t) > rho(t)", {to_string(t)});
  }
  return report;
}

ValidationReport check_coarse_embedding(const FamilyMap& map, const ControlFunctions& cf) {
  ValidationReport report = cf.validate();
  for (std::size_t k = 0; k < map.pairs.size(); ++k) {
    const auto& pair = map.pairs[k];
    const auto& dom = pair.domain;
    const auto& cod = pair.codomain;
    if (pair.table.size() != dom.size()) {
      report.violation("map.total", "map table does not cover its domain", {dom.id()});
      continue;
    }
    bool in_range = true;
    for (auto img : pair.table) {
      if (!cod.contains(img)) {
        report.violation("map.range", "image outside codomain", {dom.id(), cod.id()});
        in_range = false;
        break;
      }
    }
    if (!in_range) continue;
    const auto& X = dom.parent();
    const auto& Y = cod.parent();
    for (std::size_t a = 0; a < dom.size(); ++a) {
      for (std::size_t b = a + 1; b < dom.size(); ++b) {
        const Rational dx = X.distance(dom.members()[a], dom.members()[b]);
        const Rational dy = Y.distance(pair.table[a], pair.table[b]);
        if (cf.delta(dx) > dy) {
          report.violation("embedding.lower", "delta(d(x,y)) > d(f(x),f(y))",
                           {X.label(dom.members()[a]), X.label(dom.members()[b])});
        }
        if (dy > cf.rho(dx)) {
          report.violation("embedding.upper", "d(f(x),f(y)) > rho(d(x,y))",
                           {X.label(dom.members()[a]), X.label(dom.members()[b])});
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

FiniteMetricSpace path_space(std::size_t n, std::string id) {
  std::vector<std::string> labels;
  std::vector<std::int64_t> ticks(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      ticks[i * n + j] = i > j ? static_cast<std::int64_t>(i - j) : static_cast<std::int64_t>(j - i);
    }
  }
  return FiniteMetricSpace::from_ticks(std::move(id), std::move(labels), 1, std::move(ticks));
}

FiniteMetricSpace integer_interval(std::int64_t lo, std::int64_t hi, std::string id) {
  if (hi < lo) throw Error(ErrorCode::InputInvalid, "empty integer interval");
  const auto n = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::string> labels;
  std::vector<std::int64_t> ticks(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(lo + static_cast<std::int64_t>(i)));
    for (std::size_t j = 0; j < n; ++j) {
      ticks[i * n + j] = i > j ? static_cast<std::int64_t>(i - j) : static_cast<std::int64_t>(j - i);
    }
  }
  return FiniteMetricSpace::from_ticks(std::move(id), std::move(labels), 1, std::move(ticks));
}

namespace {

std::string tuple_label(const std::vector<std::int64_t>& c) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
  out << ')';
  return out.str();
}

}  // namespace

std::vector<std::int64_t> lattice_coordinates(std::string_view label) {
  std::vector<std::int64_t> out;
  if (label.size() < 2 || label.front() != '(' || label.back() != ')') {
    out.push_back(std::stoll(std::string(label)));
    return out;
  }
  std::string body(label.substr(1, label.size() - 2));
  std::istringstream in(body);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(std::stoll(part));
  return out;
}

FiniteMetricSpace lattice_box(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi, std::string id) {
  if (lo.size() != hi.size() || lo.empty()) throw Error(ErrorCode::InputInvalid, "lattice box bounds mismatch");
  const std::size_t dim = lo.size();
  std::vector<std::int64_t> extent(dim);
  std::size_t n = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    if (hi[k] < lo[k]) throw Error(ErrorCode::InputInvalid, "empty lattice box");
    extent[k] = hi[k] - lo[k] + 1;
    n *= static_cast<std::size_t>(extent[k]);
  }
  // Row-major with the last coordinate fastest.
  auto coords = std::make_shared<std::vector<std::int64_t>>(n * dim);
  std::vector<std::string> labels;
  labels.reserve(n);
  std::vector<std::int64_t> c(lo);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(c.begin(), c.end(), coords->begin() + static_cast<std::ptrdiff_t>(i * dim));
    labels.push_back(dim == 1 ? std::to_string(c[0]) : tuple_label(c));
    for (std::size_t k = dim; k-- > 0;) {
      if (++c[k] <= hi[k]) break;
      c[k] = lo[k];
    }
  }
  auto fn = [coords, dim](std::size_t i, std::size_t j) {
    std::int64_t s = 0;
    const auto* a = coords->data() + i * dim;
    const auto* b = coords->data() + j * dim;
    for (std::size_t k = 0; k < dim; ++k) s += a[k] > b[k] ? a[k] - b[k] : b[k] - a[k];
    return s;
  };
  return FiniteMetricSpace::from_function(std::move(id), std::move(labels), 1, std::move(fn));
}

FiniteMetricSpace shortest_path_space(std::string id, std::vector<std::string> labels,
                                      const std::vector<std::tuple<std::size_t, std::size_t, Rational>>& edges) {
  const std::size_t n = labels.size();
  mpz_class l = 1;
  for (const auto& [a, b, w] : edges) {
    if (a >= n || b >= n) throw Error(ErrorCode::InputInvalid, "edge endpoint out of range");
    if (w <= 0) throw Error(ErrorCode::InputInvalid, "edge weights must be positive");
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), w.get_den_mpz_t());
  }
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adj(n);
  for (const auto& [a, b, w] : edges) {
    const auto t = to_int64(Rational(w * Rational(l)).get_num());
    adj[a].emplace_back(b, t);
    adj[b].emplace_back(a, t);
  }
  std::vector<std::int64_t> ticks(n * n, kUnreached);
  using Item = std::pair<std::int64_t, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    auto* row = ticks.data() + s * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    row[s] = 0;
    pq.emplace(0, s);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != row[u]) continue;
      for (auto [v, w] : adj[u]) {
        if (d + w < row[v]) {
          row[v] = d + w;
          pq.emplace(row[v], v);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (row[t] == kUnreached) {
        throw Error(ErrorCode::InputInvalid, "graph for space '" + id + "' is disconnected");
      }
    }
  }
  return FiniteMetricSpace::from_ticks(std::move(id), std::move(labels), to_int64(l), std::move(ticks));
}

}  // namespace coarsekit
