#pragma once

// Finite-state Markov chains with exact rational transition matrices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wh/rational.hpp"

namespace wh {

class Fsmc {
 public:
  /// Entries must be nonnegative and every row must sum to exactly 1.
  Fsmc(std::vector<std::string> states, std::vector<std::vector<Rational>> rows);

  /// {"states": [...], "rows": [[...], ...]}. String entries are parsed as
  /// exact fractions or decimals. JSON numbers select float mode: each row
  /// must sum to 1 within 1e-12 and is then rescaled to sum to exactly 1.
  static Fsmc from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t size() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state(std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;  // throws InvalidArgument

  const Rational& p(std::size_t from, std::size_t to) const { return rows_[from][to]; }
  const std::vector<Rational>& row(std::size_t from) const { return rows_[from]; }
  Rational max_entry() const;

  /// Cumulative row sums as doubles, for inverse-CDF sampling.
  const std::vector<double>& cdf(std::size_t from) const { return cdf_[from]; }

 private:
  std::vector<std::string> states_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::vector<double>> cdf_;
};

/// Strong connectivity of the positive-transition digraph.
bool is_irreducible(const Fsmc& chain);
/// Every entry strictly below 1.
bool is_tight(const Fsmc& chain);

/// Exact solution of mu P = mu, sum mu = 1. Throws NotIrreducible.
std::vector<Rational> stationary(const Fsmc& chain);

/// mu0(s_1) p(s_1, s_2) ... p(s_{k-1}, s_k).
Rational mu0_k(const Fsmc& chain, std::span<const Rational> mu0, std::span<const std::size_t> v);

/// State names of the iterated chain are the block's names joined with '|'.
inline constexpr char kBlockSeparator = '|';

struct IteratedChain {
  Fsmc chain;
  std::vector<std::vector<std::size_t>> blocks;  // blocks[i] is state i as a k-block
};

/// The chain on positive-weight k-blocks with p(s_1..s_k, s_2..s_k s) = p(s_k, s).
IteratedChain build_iterated(const Fsmc& chain, int k);

/// Inverse-CDF sampling. Step i uses the draw with counter i of
/// CounterRng(seed), so prefixes of longer runs agree.
std::vector<std::size_t> sample(const Fsmc& chain, std::span<const Rational> mu, std::size_t n,
                                std::uint64_t seed);

/// Index drawn from cumulative weights `cdf` (last entry ~ 1) at uniform u.
std::size_t draw_from_cdf(std::span<const double> cdf, double u);

}  // namespace wh
