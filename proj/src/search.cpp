#include <algorithm>
#include <numeric>
#include <random>

#include "coarsekit/decomposition.hpp"
#include "coarsekit/error.hpp"

namespace coarsekit {

namespace {

class Searcher {
 public:
  Searcher(const FiniteMetricSpace& X, const Rational& r, std::size_t n, const Rational& D, std::uint64_t budget)
      : X_(X), r_(X.threshold(r)), D_(X.threshold(D)), colors_(n + 1), budget_(budget) {}

  bool run(const std::vector<std::size_t>& order) {
    order_ = &order;
    return place(0);
  }

  std::uint64_t nodes() const { return nodes_; }

  struct Block {
    std::size_t color;
    std::vector<std::size_t> members;
  };
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  bool can_join(std::size_t x, std::size_t b) const {
    for (auto y : blocks_[b].members) {
      if (!D_.at_most(X_.ticks(x, y))) return false;
    }
    return separated_from_color(x, blocks_[b].color, b);
  }

  bool separated_from_color(std::size_t x, std::size_t color, std::size_t skip) const {
    for (std::size_t q = 0; q < blocks_.size(); ++q) {
      if (q == skip || blocks_[q].color != color) continue;
      for (auto y : blocks_[q].members) {
        if (!r_.above(X_.ticks(x, y))) return false;
      }
    }
    return true;
  }

  bool place(std::size_t k) {
    if (++nodes_ > budget_) {
      throw Error(ErrorCode::Timeout, "search exceeded its node budget of " + std::to_string(budget_));
    }
    if (k == order_->size()) return true;
    const auto x = (*order_)[k];
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (!can_join(x, b)) continue;
      blocks_[b].members.push_back(x);
      if (place(k + 1)) return true;
      blocks_[b].members.pop_back();
    }
    for (std::size_t c = 0; c < colors_; ++c) {
      if (!separated_from_color(x, c, blocks_.size())) continue;
      blocks_.push_back({c, {x}});
      if (place(k + 1)) return true;
      blocks_.pop_back();
    }
    return false;
  }

  const FiniteMetricSpace& X_;
  Threshold r_;
  Threshold D_;
  std::size_t colors_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  const std::vector<std::size_t>* order_ = nullptr;
  std::vector<Block> blocks_;
};

}  // namespace

SearchResult search_decomposition(SpacePtr space, const Rational& r, std::size_t n, const Rational& D,
                                  const SearchOptions& options) {
  if (!space) throw Error(ErrorCode::InputInvalid, "search needs a space");
  if (r < 0 || D < 0) throw Error(ErrorCode::InputInvalid, "search needs r >= 0 and D >= 0");
  std::vector<std::size_t> order(space->size());
  std::iota(order.begin(), order.end(), 0);
  if (options.seed) {
    std::mt19937_64 rng(*options.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  Searcher searcher(*space, r, n, D, options.node_budget);
  SearchResult result;
  const bool found = searcher.run(order);
  result.nodes = searcher.nodes();
  if (!found) return result;

  DecompositionCertificate cert;
  cert.family = {space};
  cert.r = r;
  cert.n = n;
  cert.witness = BoundedWitness{D};
  std::vector<std::size_t> per_color(n + 1, 0);
  for (const auto& b : searcher.blocks()) {
    auto members = b.members;
    std::sort(members.begin(), members.end());
    cert.pieces.push_back({"c" + std::to_string(b.color) + "." + std::to_string(per_color[b.color]++), 0, b.color,
                           std::move(members)});
  }
  const auto check = verify_certificate(cert);
  if (!check.ok()) throw Error(ErrorCode::CertificateInvalid, "search produced an invalid certificate: " + check.summary());
  result.certificate = std::move(cert);
  return result;
}

}  // namespace coarsekit
