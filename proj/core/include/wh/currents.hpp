#pragma once

// Finite-depth weight tables standing in for geodesic currents.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wh/fsmc.hpp"
#include "wh/graph.hpp"
#include "wh/rational.hpp"
#include "wh/word.hpp"

namespace wh {

/// All reduced edge paths of length 1..depth, numbered shortest first and
/// then lexicographically by edge code. Node 0 is the empty path.
class PathTrie {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  PathTrie(std::shared_ptr<const MarkedGraph> chart, int depth);

  const MarkedGraph& chart() const { return *chart_; }
  const std::shared_ptr<const MarkedGraph>& chart_ptr() const { return chart_; }
  int depth() const { return depth_; }
  std::size_t size() const { return paths_.size(); }
  const Path& path(std::size_t node) const { return paths_[node]; }
  std::size_t child(std::size_t node, Edge e) const { return children_[node * stride_ + e]; }
  std::size_t find(std::span<const Edge> p) const;  // npos when absent
  std::size_t inverse(std::size_t node) const { return inverse_[node]; }
  /// Nodes with paths of exactly this length.
  std::pair<std::size_t, std::size_t> level(int length) const;

 private:
  std::shared_ptr<const MarkedGraph> chart_;
  int depth_;
  std::size_t stride_;
  std::vector<Path> paths_;
  std::vector<std::size_t> children_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> level_start_;
};

class WeightTable {
 public:
  WeightTable(std::shared_ptr<const PathTrie> trie, std::vector<Rational> weights);

  const PathTrie& trie() const { return *trie_; }
  const std::shared_ptr<const PathTrie>& trie_ptr() const { return trie_; }
  const MarkedGraph& chart() const { return trie_->chart(); }
  int depth() const { return trie_->depth(); }

  const Rational& weight(std::size_t node) const { return weights_[node]; }
  /// Throws InvalidArgument for non-reduced paths or paths deeper than depth.
  const Rational& weight(std::span<const Edge> p) const;
  /// Rose charts only: weight of a reduced word.
  const Rational& weight(const Word& v) const;

  WeightTable scaled(const Rational& s) const;

  /// One JSON object {"word", "weight"} per path, weight as a fraction string.
  std::vector<nlohmann::json> dump() const;

 private:
  std::shared_ptr<const PathTrie> trie_;
  std::vector<Rational> weights_;
};

/// Shared trie per (chart, depth); tables built over one trie compare directly.
std::shared_ptr<const PathTrie> make_trie(std::shared_ptr<const MarkedGraph> chart, int depth);

/// Weights count occurrences of v and v^-1 in the closed, cyclically reduced path.
WeightTable counting_current(std::shared_ptr<const PathTrie> trie, std::span<const Edge> closed);
/// Rose chart of rank N.
WeightTable counting_current(const CyclicWord& c, int depth, int rank = 0);

/// 1 / (N (2N-1)^(k-1)) on every reduced word of length k.
WeightTable uniform_current(int rank, int depth);

/// mu0[k](v) + mu0[k](v^-1). Requires an irreducible Gamma-based chain.
WeightTable characteristic_current(const Fsmc& chain, std::shared_ptr<const MarkedGraph> g, int depth);

struct SwitchViolation {
  Path path;
  Rational weight;
  Rational right_sum;
  Rational left_sum;
};

/// Both extension sums for every path shorter than the depth.
std::vector<SwitchViolation> check_switch(const WeightTable& t);
/// Paths whose weight differs from their inverse's weight.
std::vector<Path> check_flip(const WeightTable& t);

/// Half the sum of the weights of all oriented edges.
Rational length_norm(const WeightTable& t);

/// Every reduced path of length 1..max_length.
std::vector<Path> default_probes(const PathTrie& trie, int max_length = 3);

/// max over probes of |t1(v)/norm(t1) - t2(v)/norm(t2)|.
Rational projective_distance(const WeightTable& t1, const WeightTable& t2, std::span<const Path> probes);
Rational projective_distance(const WeightTable& t1, const WeightTable& t2);

}  // namespace wh
