#include "wh/samplers.hpp"

#include "wh/error.hpp"

namespace wh {

Word sample_uniform_nb(int rank, std::size_t n, std::uint64_t seed) {
  const Alphabet alphabet(rank);
  CounterRng rng(seed);
  std::vector<Letter> letters;
  letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (letters.empty()) {
      letters.push_back(Letter::from_code(static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(2 * rank)))));
      continue;
    }
    // Skip the inverse of the previous letter among the 2N - 1 choices.
    auto code = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(2 * rank - 1)));
    if (code >= letters.back().inverse().code()) ++code;
    letters.push_back(Letter::from_code(code));
  }
  return free_reduce(letters);
}

CyclicWord sample_uniform_cyclic(int rank, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("cyclic words have positive length");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Word w = sample_uniform_nb(rank, n, mix_seed({seed, attempt}));
    if (is_cyclically_reduced(w.letters())) return canonical_rotation(w.letters());
  }
}

Word sample_biased_letters(std::span<const std::pair<Letter, double>> dist, std::size_t n, std::uint64_t seed) {
  if (dist.empty()) throw InvalidArgument("empty letter distribution");
  std::vector<double> cdf;
  double acc = 0;
  for (const auto& [x, p] : dist) {
    if (p < 0) throw InvalidArgument("negative letter probability");
    acc += p;
    cdf.push_back(acc);
  }
  for (double& c : cdf) c /= acc;
  const CounterRng rng(seed);
  std::vector<Letter> letters;
  letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) letters.push_back(dist[draw_from_cdf(cdf, rng.uniform_at(i))].first);
  return free_reduce(letters);
}

Word sample_group_walk(std::span<const std::pair<Word, Rational>> mu, std::size_t n, std::uint64_t seed) {
  if (mu.empty()) throw InvalidArgument("empty step distribution");
  std::vector<double> cdf;
  Rational acc = 0;
  for (const auto& [w, p] : mu) {
    if (p < 0) throw InvalidArgument("negative step probability");
    acc += p;
    cdf.push_back(acc.get_d());
  }
  if (acc != 1) throw InvalidArgument("step distribution does not sum to 1");
  const CounterRng rng(seed);
  std::vector<Letter> stack;
  for (std::size_t i = 0; i < n; ++i) {
    for (Letter x : mu[draw_from_cdf(cdf, rng.uniform_at(i))].first.letters()) {
      if (!stack.empty() && stack.back() == x.inverse())
        stack.pop_back();
      else
        stack.push_back(x);
    }
  }
  return free_reduce(stack);
}

Path sample_edge_walk(const Fsmc& chain, const MarkedGraph& g, std::span<const Rational> mu, std::size_t n,
                      std::uint64_t seed) {
  const std::vector<Edge> edges = chain_edges(chain, g);
  const std::vector<std::size_t> states = sample(chain, mu, n, seed);
  Path path;
  path.reserve(n);
  for (std::size_t s : states) {
    const Edge e = edges[s];
    if (!path.empty() && (e == edge_inverse(path.back()) || g.origin(e) != g.terminus(path.back())))
      throw Error("chain produced a non-reduced edge path");
    path.push_back(e);
  }
  return path;
}

DirectedSample sample_fsmc_directed(const Fsmc& chain, const MarkedGraph& g, const ClosingSystem& B,
                                    std::span<const Rational> mu, ClosingMode mode, std::size_t n,
                                    std::uint64_t seed) {
  Path raw = sample_edge_walk(chain, g, mu, n, seed);
  Path closed = mode == ClosingMode::Hat ? hat_closing(raw, B) : breve_closing(raw, g, B);
  CyclicWord cls = path_to_class(closed, g);
  return {std::move(raw), std::move(closed), std::move(cls)};
}

std::vector<Rational> uniform_initial(const Fsmc& chain) {
  return std::vector<Rational>(chain.size(), Rational(1, static_cast<unsigned long>(chain.size())));
}

}  // namespace wh
