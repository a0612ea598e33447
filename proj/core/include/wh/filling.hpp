#pragma once

// Filling certificates with re-checkable evidence.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wh/currents.hpp"
#include "wh/fsmc.hpp"
#include "wh/graph.hpp"
#include "wh/word.hpp"

namespace wh {

enum class FillingMethod { ThreeSubword, FullSupportDepth, BasisPairs, WordPower, FsmcXF };

std::string to_string(FillingMethod m);
FillingMethod parse_filling_method(const std::string& name);

struct FillingOptions {
  /// WordPower: closed path in the chart (letter codes on a rose).
  std::optional<Path> word;
  /// FsmcXF: force a case; otherwise cases 1, 2, 4, 3 are tried in turn.
  std::optional<int> xf_case;
  /// FsmcXF case 3: the filling closed path.
  std::optional<Path> xf_path;
};

struct FillingCertificate {
  FillingMethod method;
  /// FsmcXF and ThreeSubword are conclusive; table checks are evidence to `depth`.
  bool conclusive = false;
  int depth = 0;
  int xf_case = 0;
  nlohmann::json evidence;

  nlohmann::json to_json() const;
};

struct Inconclusive {
  std::string reason;
};

using FillingVerdict = std::variant<FillingCertificate, Inconclusive>;

/// ThreeSubword only. `rank` defaults to the smallest rank expressing c.
FillingVerdict certify_filling(const CyclicWord& c, FillingMethod method, int rank = 0);
/// FsmcXF on the chain. WordPower checks z^n for n <= depth with exact cylinder
/// weights. Other table methods use the characteristic table of depth `depth`.
FillingVerdict certify_filling(const Fsmc& chain, std::shared_ptr<const MarkedGraph> g, FillingMethod method,
                               const FillingOptions& opt = {}, int depth = 4);
/// FullSupportDepth, BasisPairs or WordPower.
FillingVerdict certify_filling(const WeightTable& t, FillingMethod method, const FillingOptions& opt = {});

/// Problems found while re-checking the evidence; empty when valid.
std::vector<std::string> verify_certificate(const FillingCertificate& cert, const CyclicWord& c, int rank = 0);
std::vector<std::string> verify_certificate(const FillingCertificate& cert, const Fsmc& chain, const MarkedGraph& g);
std::vector<std::string> verify_certificate(const FillingCertificate& cert, const WeightTable& t);

}  // namespace wh
