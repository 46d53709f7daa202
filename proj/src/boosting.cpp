#include "coarsekit/boosting.hpp"

#include <algorithm>
#include <map>

#include "coarsekit/error.hpp"

namespace coarsekit {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

[[noreturn]] void reject(const std::string& what, const ValidationReport& report) {
  std::string msg = what;
  if (const auto* f = report.first(Severity::Violation)) {
    msg += ": " + f->rule + " " + f->message;
    for (const auto& w : f->witness) msg += " [" + w + "]";
  }
  throw Error(ErrorCode::InputInvalid, msg);
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

}  // namespace

BoostResult kolmogorov_step(const DecompositionCertificate& input, unsigned jobs) {
  if (!input.bounded()) throw Error(ErrorCode::InputInvalid, "boosting needs a bounded witness");
  const auto pre = verify_certificate(input, jobs);
  if (!pre.ok()) reject("input does not verify at scale " + to_string(input.r), pre);

  const std::size_t k = input.depth - 1;
  const std::size_t old_colors = input.colors();
  const Rational r = input.r / 3;

  BoostResult out;
  auto& cert = out.cert;
  cert.family = input.family;
  cert.r = r;
  cert.n = input.n + 1;
  cert.depth = input.depth + 1;
  cert.witness = BoundedWitness{input.bound() + 2 * r};

  for (std::size_t s = 0; s < input.family.size(); ++s) {
    const auto& X = *input.family[s];
    const auto thr = X.threshold(r);
    // inside[x][c]: piece of color c containing x; near[y][c]: piece of color c within distance < r of y.
    std::vector<std::vector<std::size_t>> inside(X.size(), std::vector<std::size_t>(old_colors, kNone));
    std::vector<std::vector<std::size_t>> near(X.size(), std::vector<std::size_t>(old_colors, kNone));
    std::vector<std::size_t> own;
    for (std::size_t i = 0; i < input.pieces.size(); ++i) {
      const auto& p = input.pieces[i];
      if (p.space != s) continue;
      own.push_back(i);
      for (auto x : p.members) inside[x][p.color] = i;
    }
    for (std::size_t x = 0; x < X.size(); ++x) {
      for (std::size_t y = 0; y < X.size(); ++y) {
        if (!thr.below(X.ticks(x, y))) continue;
        for (std::size_t c = 0; c < old_colors; ++c) {
          if (inside[x][c] != kNone) near[y][c] = inside[x][c];
        }
      }
    }
    for (auto i : own) {
      const auto& p = input.pieces[i];
      Piece fat{p.name, s, p.color, {}};
      for (std::size_t y = 0; y < X.size(); ++y) {
        if (near[y][p.color] == i) fat.members.push_back(y);
      }
      cert.pieces.push_back(std::move(fat));
    }
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t x = 0; x < X.size(); ++x) {
      std::vector<std::size_t> key;
      for (std::size_t c = 0; c < old_colors; ++c) {
        if (near[x][c] != kNone) key.push_back(near[x][c]);
      }
      if (key.size() == k + 1) groups[key].push_back(x);
    }
    for (auto& [key, members] : groups) {
      std::vector<std::string> I, J;
      for (auto i : key) {
        I.push_back(std::to_string(input.pieces[i].color));
        J.push_back(input.pieces[i].name.empty() ? "#" + std::to_string(i) : input.pieces[i].name);
      }
      cert.pieces.push_back({"(" + join(I) + ";" + join(J) + ")", s, cert.n, members});
      // The new piece must sit inside every old piece named in J.
      for (auto x : members) {
        for (auto i : key) {
          if (inside[x][input.pieces[i].color] != i) {
            out.report.violation("boost.intersection", "new piece leaves an old piece", {X.id(), X.label(x)});
          }
        }
      }
    }
  }

  // Verify everything except new-color separation at exactly r, then
  // classify new-color gaps separately.
  auto strict = verify_certificate(cert, jobs);
  std::size_t kept = 0;
  for (const auto& f : strict.findings()) {
    const bool new_color_gap = f.rule == "cert.disjoint" && f.witness.size() > 1 && f.witness[1] == std::to_string(cert.n);
    if (new_color_gap) continue;
    out.report.add(f);
    kept += f.severity == Severity::Violation;
  }
  std::size_t gaps = 0;
  for (std::size_t s = 0; s < cert.family.size(); ++s) {
    const auto& X = *cert.family[s];
    std::vector<const Piece*> fresh;
    for (const auto& p : cert.pieces) {
      if (p.space == s && p.color == cert.n) fresh.push_back(&p);
    }
    const auto thr = X.threshold(r);
    const auto close = close_piece_pairs(X, fresh, thr, jobs);
    gaps += close.size();
    for (const auto& gap : close) {
      const bool boundary = thr.floor == thr.ceil && gap.ticks == thr.floor;
      const std::vector<std::string> witness{X.id(), std::to_string(cert.n), fresh[gap.a]->name, fresh[gap.b]->name};
      if (boundary) {
        ++out.boundary_pairs;
        out.report.warning("boost.boundary", "new-color pieces at distance exactly r", witness);
      } else {
        out.report.violation("cert.disjoint", "new-color pieces closer than r", witness);
      }
    }
  }
  if (strict.count(Severity::Violation) > kept + gaps) {
    out.report.violation("boost.verify", std::to_string(strict.count(Severity::Violation) - kept - gaps) +
                                             " further violations not listed");
  }
  return out;
}

BoostResult boost_to_depth(const DecompositionCertificate& cert, std::int64_t k, unsigned jobs) {
  if (k < 0) throw Error(ErrorCode::ScheduleUnderflow, "boost depth k must be >= 0");
  BoostResult current;
  current.cert = cert;
  current.report = verify_certificate(cert, jobs);
  if (!current.report.ok()) reject("input does not verify", current.report);
  for (std::int64_t step = 1; step <= k; ++step) {
    auto next = kolmogorov_step(current.cert, jobs);
    ValidationReport merged = current.report;
    merged.merge(next.report, "step" + std::to_string(step) + ".");
    next.report = std::move(merged);
    next.boundary_pairs += current.boundary_pairs;
    current = std::move(next);
  }
  return current;
}

CombineResult combine_cover(const DecompositionCertificate& boosted, std::size_t m, std::size_t n,
                            const std::vector<std::vector<Piece>>& covers, const Rational& D, unsigned jobs) {
  if (boosted.n != m + n) {
    throw Error(ErrorCode::InputInvalid, "boosted decomposition must have colors 0..m+n = 0.." + std::to_string(m + n));
  }
  if (covers.size() != boosted.pieces.size()) {
    throw Error(ErrorCode::InputInvalid, "need one cover per boosted piece");
  }
  DecompositionCertificate check = boosted;
  check.depth = m + 1;
  check.witness = CoverWitness{m, m + n + 1, n + 1, D, boosted.r, covers};
  const auto pre = verify_certificate(check, jobs);
  if (!pre.ok()) reject("combiner precondition failed", pre);

  CombineResult out;
  auto& cert = out.cert;
  cert.family = boosted.family;
  cert.r = boosted.r;
  cert.n = m + n;
  cert.depth = 1;
  cert.witness = BoundedWitness{D};
  for (std::size_t i = 0; i <= m + n; ++i) {
    for (std::size_t j = 0; j < boosted.pieces.size(); ++j) {
      const auto& piece = boosted.pieces[j];
      if (piece.color != i) continue;
      for (const auto& u : covers[j]) {
        if (u.color != i) continue;
        cert.pieces.push_back({"V" + std::to_string(i) + ":" + piece.name + "/" + u.name, piece.space, i, u.members});
      }
    }
  }
  out.report = verify_certificate(cert, jobs);
  return out;
}

}  // namespace coarsekit
