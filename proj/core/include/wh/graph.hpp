#pragma once

// Marked graphs, Gamma-based chains, closing path systems and presets.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wh/fsmc.hpp"
#include "wh/word.hpp"

namespace wh {

/// Oriented edge code. Codes come in pairs: the inverse of e is e ^ 1. On a
/// rose the code of a letter's petal equals the letter's code.
using Edge = std::uint16_t;
using Path = std::vector<Edge>;

inline constexpr Edge edge_inverse(Edge e) { return static_cast<Edge>(e ^ 1u); }

class MarkedGraph {
 public:
  struct EdgeSpec {
    std::string id;
    std::string inv;
    std::string from;
    std::string to;
  };

  /// `edges` lists oriented edges; an edge whose inverse id is missing gets it
  /// synthesized. `tree_edges` name one orientation of each spanning-tree
  /// pair; `letter_edges[i]` is the oriented edge read as a_{i+1}.
  MarkedGraph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges, const std::string& base,
              const std::vector<std::string>& tree_edges, const std::vector<std::string>& letter_edges);

  static MarkedGraph rose(int rank);
  /// {vertices, edges: [{id, inv, from, to}], base, tree_edges, letter_edges}
  static MarkedGraph from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int rank() const { return rank_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return origin_.size(); }
  const std::string& vertex(std::size_t v) const { return vertices_[v]; }
  std::size_t base() const { return base_; }
  bool is_rose() const { return vertices_.size() == 1; }

  const std::string& edge_id(Edge e) const { return ids_[e]; }
  std::optional<Edge> find_edge(const std::string& id) const;
  std::size_t origin(Edge e) const { return origin_[e]; }
  std::size_t terminus(Edge e) const { return origin_[edge_inverse(e)]; }
  const std::vector<Edge>& out_edges(std::size_t v) const { return out_[v]; }
  bool is_tree(Edge e) const { return tree_[e]; }
  /// Letter read along e, empty for tree edges.
  std::optional<Letter> letter(Edge e) const { return letter_[e]; }
  /// Oriented edge read as `x`.
  Edge letter_edge(Letter x) const { return letter_edge_[x.code()]; }

  std::size_t degree(std::size_t v) const { return out_[v].size(); }
  /// Degree < 3 vertices and #E > 6N; empty when the graph is a proper chart.
  std::vector<std::string> warnings() const;

  /// Reduced edge path inside the spanning tree from u to v.
  Path tree_path(std::size_t u, std::size_t v) const;

  bool is_path(std::span<const Edge> p) const;
  bool is_reduced(std::span<const Edge> p) const;
  bool is_closed(std::span<const Edge> p) const;
  /// Closed, reduced, and last edge not inverse to the first.
  bool is_cyclically_reduced(std::span<const Edge> p) const;

  /// Path reading the word w from the base vertex (tree paths inserted),
  /// freely reduced as an edge path.
  Path path_of_word(const Word& w) const;

  std::string path_str(std::span<const Edge> p) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<std::string> ids_;
  std::vector<std::size_t> origin_;
  std::vector<std::vector<Edge>> out_;
  std::vector<bool> tree_;
  std::vector<std::optional<Letter>> letter_;
  std::vector<Edge> letter_edge_;
  std::vector<std::vector<std::pair<std::size_t, Edge>>> tree_adj_;
  std::size_t base_ = 0;
  int rank_ = 0;
};

Path reverse_path(std::span<const Edge> p);
/// Free reduction of an edge sequence.
Path reduce_path(std::span<const Edge> p);
/// Strip matching first/last inverse pairs of a closed reduced path.
Path cyc(std::span<const Edge> p);

struct Violation {
  std::string detail;
};

/// States must name edges; positive transitions must be composable and
/// non-backtracking; at least two states.
std::vector<Violation> validate_gamma_based(const Fsmc& chain, const MarkedGraph& g);
/// State i of a Gamma-based chain as an edge code.
std::vector<Edge> chain_edges(const Fsmc& chain, const MarkedGraph& g);

class ClosingSystem {
 public:
  /// Shortest connectors by BFS over (vertex, last edge) states, scanning
  /// edges in code order. Throws NoClosingPath if some pair has none.
  explicit ClosingSystem(const MarkedGraph& g);

  const Path& beta(Edge e, Edge e2) const { return table_[static_cast<std::size_t>(e) * n_ + e2]; }
  std::size_t max_length() const { return max_len_; }

 private:
  std::size_t n_;
  std::vector<Path> table_;
  std::size_t max_len_ = 0;
};

/// path . beta(last, first).
Path hat_closing(std::span<const Edge> path, const ClosingSystem& B);
/// cyc(path) when the path is closed, the hat closing otherwise.
Path breve_closing(std::span<const Edge> path, const MarkedGraph& g, const ClosingSystem& B);

/// Conjugacy class read from the letters of a closed path. Throws Degenerate
/// when the class is trivial.
CyclicWord path_to_class(std::span<const Edge> closed, const MarkedGraph& g);

/// True when s_i = inverse(s_{n+1-i}) for i = 1..floor(sqrt n).
bool quasi_inverted(std::span<const Edge> path);

struct Preset {
  std::string name;
  std::shared_ptr<const MarkedGraph> graph;
  Fsmc chain;
};

/// rose2 | rose-positive | lollipop | chart-example2; rank applies to the
/// rose and lollipop families.
Preset make_preset(const std::string& name, int rank = 2);
std::vector<std::string> preset_names();

}  // namespace wh
