#pragma once

// Strict minimality, (M, lambda, eps)-minimizing sets and distortion
// estimates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wh/moves.hpp"
#include "wh/rational.hpp"
#include "wh/whitehead.hpp"
#include "wh/word.hpp"

namespace wh {

/// True iff every non-inner second-kind move strictly increases ||c||.
bool is_strictly_minimal(const MoveSet& set, const CyclicWord& c);

struct MleParams {
  int M = 1;
  Rational lambda{3, 2};
  Rational epsilon{1, 10};

  /// M >= 1, lambda > 1, 0 <= epsilon < lambda - 1.
  void validate() const;
  /// lambda (1 - eps) / (1 + eps) > 1, required by detect_mlew.
  bool detector_admissible() const;
};

enum class MleMode { MLE, MLEW };

struct MleViolation {
  int condition;  // 1..4 of the definition
  std::string detail;
};

struct MleVerdict {
  bool ok = true;
  std::vector<MleViolation> violations;
};

struct MlewDetection {
  bool minimal = false;
  std::vector<CyclicWord> set;  // S', sorted; partial when condition 1 failed
  std::optional<MleViolation> failure;
};

/// Collects S' = classes reachable from c by at most M moves, each step at
/// most (1 + eps) times longer, aborting once #S' > M, and then checks
/// conditions 1, 3, 4 on S'. Throws InvalidArgument unless the parameters are
/// detector-admissible.
MlewDetection detect_mlew(const MoveSet& set, const CyclicWord& c, const MleParams& p);

/// MLEW mode applies every move to every member. MLE mode checks condition 4
/// exactly: every orbit class shorter than lambda * ||u|| must lie in S,
/// enumerated by orbit_ball with cap max(ceil(lambda ||u||) - 1, ||u||).
/// Condition 2 is decided with the Whitehead algorithm.
MleVerdict verify_minimizing_set(const MoveSet& set, std::vector<CyclicWord> S, const MleParams& p,
                                 MleMode mode, std::size_t vertex_cap = kDefaultVertexCap);

struct DistortionOptions {
  int radius = 1;
  std::size_t samples = 200;
  std::size_t probes = 32;
  std::size_t probe_length = 12;
  std::uint64_t seed = 1;
  /// Means within this distance of the minimum count as minimizing.
  double tie_tolerance = 1e-9;
};

inline constexpr std::size_t kConfidenceSampleFloor = 200;

struct AutomorphismStat {
  std::vector<std::size_t> moves;  // product applied left to right
  bool first_kind_only = false;
  std::size_t count = 0;
  double mean = 0;
  double sd = 0;
  double radius = 0;  // 1.96 sd / sqrt(count)
  bool below_floor = false;  // count < kConfidenceSampleFloor
};

struct DistortionEstimate {
  std::vector<AutomorphismStat> stats;  // sorted by mean, then by move sequence
  std::vector<std::size_t> minimizing;  // indices into stats
  double J = 0;
  std::optional<double> lambda;  // second-smallest mean / smallest
  std::size_t multiplicity = 0;
  std::size_t deduplicated = 0;  // products merged by identical probe action
  std::size_t samples = 0;

  nlohmann::json to_json(const MoveSet& set) const;
};

/// Mean ratio ||phi(w)|| / ||w|| over `samples` draws of stream(i), for every
/// product phi of at most `radius` moves, deduplicated by action on probe
/// words.
DistortionEstimate estimate_distortion(const MoveSet& set,
                                       const std::function<CyclicWord(std::size_t)>& stream,
                                       const DistortionOptions& opt);

}  // namespace wh
