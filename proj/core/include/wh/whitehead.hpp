#pragma once

// Whitehead minimization, level components T_n[c], orbit equivalence and
// stabilizer loops, with replayable witnesses.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wh/moves.hpp"
#include "wh/word.hpp"

namespace wh {

inline constexpr std::size_t kDefaultVertexCap = 1'000'000;

struct WitnessStep {
  std::size_t move;   // index into the MoveSet
  std::uint64_t pre;  // fingerprint of the class the move is applied to
};

/// A move sequence carrying `source` to `target`.
struct Witness {
  CyclicWord source;
  CyclicWord target;
  std::vector<WitnessStep> steps;

  std::vector<std::size_t> moves() const;
  nlohmann::json to_json(const MoveSet& moves) const;
};

/// Replays `moves` from `source`, recording fingerprints.
Witness make_witness(const MoveSet& set, const CyclicWord& source, std::span<const std::size_t> moves);
/// Throws WitnessMismatch at the first step whose fingerprint or final class
/// disagrees.
void verify_witness(const MoveSet& set, const Witness& w);
bool witness_replays(const MoveSet& set, const Witness& w);
/// Witness for target -> source using inverse moves.
Witness reverse_witness(const MoveSet& set, const Witness& w);
/// a then b; requires a.target == b.source.
Witness concat_witness(const Witness& a, const Witness& b);

bool is_whitehead_minimal(const MoveSet& set, const CyclicWord& c);

struct Minimization {
  CyclicWord result;
  Witness witness;
  std::size_t steps;
};

/// Steepest descent: each step applies the move with the largest length drop,
/// ties broken by move index.
Minimization minimize(const MoveSet& set, const CyclicWord& c);

/// Runs minimize on c and on every aux(c), keeping the shortest result, then
/// the fewest descent steps, then the first. `steps` counts only the descent
/// after the aux prefix.
Minimization speedup_minimize(const MoveSet& set, const CyclicWord& c,
                              const std::vector<std::vector<std::size_t>>& aux);

struct LevelEdge {
  std::size_t from;
  std::size_t to;
  std::size_t move;
};

/// Connected component of the level-n graph containing `root`: vertices are
/// classes of cyclic length n, edges are non-inner moves preserving length.
struct LevelComponent {
  std::size_t level = 0;
  std::vector<CyclicWord> vertices;  // vertices[0] is the root
  std::vector<LevelEdge> edges;      // every directed (vertex, move) pair
  /// BFS tree: parent vertex and the move leading from it; empty for root.
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> parent;

  std::optional<std::size_t> find(const CyclicWord& c) const;
  /// Directed edges paired with their reverse (tau at u ~ tau^-1 at tau(u)).
  std::size_t topological_edge_count(const MoveSet& set) const;
  /// Moves along the BFS tree from the root to vertex v.
  std::vector<std::size_t> tree_path(std::size_t v) const;

  std::unordered_map<CyclicWord, std::size_t> index;
};

/// Throws InvalidArgument if c is not Whitehead-minimal, CapExceeded past the cap.
LevelComponent level_component(const MoveSet& set, const CyclicWord& c,
                               std::size_t vertex_cap = kDefaultVertexCap);

struct Equivalence {
  bool equivalent;
  std::optional<Witness> witness;  // verified before return
};

Equivalence equivalent(const MoveSet& set, const CyclicWord& c1, const CyclicWord& c2,
                       std::size_t vertex_cap = kDefaultVertexCap);

/// One loop at c per non-tree topological edge of the level component; the
/// count equals #edges - #vertices + 1. Every loop is verified.
std::vector<Witness> stabilizer_generators(const MoveSet& set, const CyclicWord& c,
                                           std::size_t vertex_cap = kDefaultVertexCap);

/// Classes in the orbit of c reachable through classes of length <= length_cap.
/// By peak reduction this is every orbit class of length <= length_cap when
/// length_cap >= ||c||.
std::vector<CyclicWord> orbit_ball(const MoveSet& set, const CyclicWord& c, std::size_t length_cap,
                                   std::size_t vertex_cap = kDefaultVertexCap);

}  // namespace wh
