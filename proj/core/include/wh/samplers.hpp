#pragma once

// Seeded random word generators.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wh/fsmc.hpp"
#include "wh/graph.hpp"
#include "wh/rational.hpp"
#include "wh/rng.hpp"
#include "wh/word.hpp"

namespace wh {

/// Uniform element of the n-sphere of F_N (simple non-backtracking walk).
Word sample_uniform_nb(int rank, std::size_t n, std::uint64_t seed);

/// Uniform cyclically reduced word of length n, by rejection from the sphere.
CyclicWord sample_uniform_cyclic(int rank, std::size_t n, std::uint64_t seed);

/// n i.i.d. letters, then freely reduced. A support inside A gives a
/// positive, hence cyclically reduced, word.
Word sample_biased_letters(std::span<const std::pair<Letter, double>> dist, std::size_t n, std::uint64_t seed);

/// W_n = X_1 ... X_n for i.i.d. increments drawn from a finitely supported
/// measure given as (word, probability) pairs summing to 1.
Word sample_group_walk(std::span<const std::pair<Word, Rational>> mu, std::size_t n, std::uint64_t seed);

enum class ClosingMode { Hat, Breve };

/// Raw X-directed walk of n edges; throws Error if a non-reduced step appears.
Path sample_edge_walk(const Fsmc& chain, const MarkedGraph& g, std::span<const Rational> mu, std::size_t n,
                      std::uint64_t seed);

struct DirectedSample {
  Path raw;
  Path closed;
  CyclicWord cls;
};

DirectedSample sample_fsmc_directed(const Fsmc& chain, const MarkedGraph& g, const ClosingSystem& B,
                                    std::span<const Rational> mu, ClosingMode mode, std::size_t n,
                                    std::uint64_t seed);

/// Uniform initial distribution on the chain's states.
std::vector<Rational> uniform_initial(const Fsmc& chain);

}  // namespace wh
