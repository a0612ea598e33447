#include "wh/currents.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include <nlohmann/json.hpp>

#include "wh/error.hpp"

namespace wh {

PathTrie::PathTrie(std::shared_ptr<const MarkedGraph> chart, int depth)
    : chart_(std::move(chart)), depth_(depth), stride_(chart_->edge_count()) {
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  paths_.push_back({});
  children_.assign(stride_, npos);
  level_start_.push_back(0);
  std::size_t begin = 0, end = 1;
  for (int len = 1; len <= depth; ++len) {
    level_start_.push_back(paths_.size());
    for (std::size_t node = begin; node < end; ++node) {
      const Path base = paths_[node];
      for (std::size_t code = 0; code < stride_; ++code) {
        const Edge e = static_cast<Edge>(code);
        if (!base.empty() && (e == edge_inverse(base.back()) || chart_->origin(e) != chart_->terminus(base.back())))
          continue;
        Path p = base;
        p.push_back(e);
        children_[node * stride_ + code] = paths_.size();
        paths_.push_back(std::move(p));
        children_.resize(paths_.size() * stride_, npos);
      }
    }
    begin = end;
    end = paths_.size();
  }
  level_start_.push_back(paths_.size());
  inverse_.assign(paths_.size(), 0);
  for (std::size_t node = 1; node < paths_.size(); ++node) inverse_[node] = find(reverse_path(paths_[node]));
}

std::size_t PathTrie::find(std::span<const Edge> p) const {
  std::size_t node = 0;
  for (Edge e : p) {
    if (e >= stride_) return npos;
    node = children_[node * stride_ + e];
    if (node == npos) return npos;
  }
  return node;
}

std::pair<std::size_t, std::size_t> PathTrie::level(int length) const {
  if (length < 0 || length > depth_) throw InvalidArgument("level outside trie depth");
  return {level_start_[static_cast<std::size_t>(length)], level_start_[static_cast<std::size_t>(length) + 1]};
}

WeightTable::WeightTable(std::shared_ptr<const PathTrie> trie, std::vector<Rational> weights)
    : trie_(std::move(trie)), weights_(std::move(weights)) {
  if (weights_.size() != trie_->size()) throw InvalidArgument("weight vector does not match trie");
  weights_[0] = 0;
}

const Rational& WeightTable::weight(std::span<const Edge> p) const {
  if (p.empty() || static_cast<int>(p.size()) > depth()) throw InvalidArgument("path length outside table depth");
  const std::size_t node = trie_->find(p);
  if (node == PathTrie::npos) throw InvalidArgument("not a reduced path of the chart");
  return weights_[node];
}

const Rational& WeightTable::weight(const Word& v) const {
  if (!chart().is_rose()) throw InvalidArgument("word lookup needs a rose chart");
  Path p;
  for (Letter x : v.letters()) p.push_back(x.code());
  return weight(p);
}

WeightTable WeightTable::scaled(const Rational& s) const {
  std::vector<Rational> w = weights_;
  for (auto& q : w) q *= s;
  return WeightTable(trie_, std::move(w));
}

std::vector<nlohmann::json> WeightTable::dump() const {
  std::vector<nlohmann::json> out;
  for (std::size_t node = 1; node < trie_->size(); ++node)
    out.push_back({{"word", chart().path_str(trie_->path(node))}, {"weight", to_string(weights_[node])}});
  return out;
}

std::shared_ptr<const PathTrie> make_trie(std::shared_ptr<const MarkedGraph> chart, int depth) {
  static std::mutex mutex;
  static std::map<std::pair<const MarkedGraph*, int>, std::weak_ptr<const PathTrie>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{chart.get(), depth}];
  if (auto t = slot.lock(); t && t->chart_ptr() == chart) return t;
  auto t = std::make_shared<const PathTrie>(chart, depth);
  slot = t;
  return t;
}

WeightTable counting_current(std::shared_ptr<const PathTrie> trie, std::span<const Edge> closed) {
  const MarkedGraph& g = trie->chart();
  if (!g.is_cyclically_reduced(closed)) throw InvalidArgument("counting current needs a cyclically reduced closed path");
  const std::size_t n = closed.size();
  const auto depth = static_cast<std::size_t>(trie->depth());
  std::vector<long long> forward(trie->size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t node = 0;
    for (std::size_t j = 0; j < depth; ++j) {
      node = trie->child(node, closed[(i + j) % n]);
      ++forward[node];
    }
  }
  std::vector<Rational> w(trie->size());
  for (std::size_t node = 1; node < trie->size(); ++node)
    w[node] = Rational(static_cast<long>(forward[node] + forward[trie->inverse(node)]));
  return WeightTable(std::move(trie), std::move(w));
}

WeightTable counting_current(const CyclicWord& c, int depth, int rank) {
  const int r = std::max(rank, rank_of(c.letters()));
  auto trie = make_trie(std::make_shared<const MarkedGraph>(MarkedGraph::rose(r)), depth);
  Path p;
  p.reserve(c.size());
  for (Letter x : c.letters()) p.push_back(x.code());
  return counting_current(std::move(trie), p);
}

WeightTable uniform_current(int rank, int depth) {
  auto trie = make_trie(std::make_shared<const MarkedGraph>(MarkedGraph::rose(rank)), depth);
  std::vector<Rational> w(trie->size());
  Rational level_weight(1, static_cast<unsigned long>(rank));
  for (int k = 1; k <= depth; ++k) {
    auto [b, e] = trie->level(k);
    for (std::size_t node = b; node < e; ++node) w[node] = level_weight;
    level_weight /= static_cast<unsigned long>(2 * rank - 1);
  }
  return WeightTable(std::move(trie), std::move(w));
}

WeightTable characteristic_current(const Fsmc& chain, std::shared_ptr<const MarkedGraph> g, int depth) {
  if (auto v = validate_gamma_based(chain, *g); !v.empty()) throw InvalidArgument("chain is not Gamma-based: " + v[0].detail);
  const std::vector<Rational> mu0 = stationary(chain);
  const std::vector<Edge> edges = chain_edges(chain, *g);
  std::vector<std::optional<std::size_t>> state_of(g->edge_count());
  for (std::size_t s = 0; s < edges.size(); ++s) state_of[edges[s]] = s;

  auto trie = make_trie(std::move(g), depth);
  // mu0[k] along the trie: extend the parent's value by one transition.
  std::vector<Rational> mu(trie->size(), 0);
  for (std::size_t node = 1; node < trie->size(); ++node) {
    const Path& p = trie->path(node);
    const auto s = state_of[p.back()];
    if (!s) continue;
    if (p.size() == 1) {
      mu[node] = mu0[*s];
      continue;
    }
    const std::size_t parent = trie->find(std::span<const Edge>(p.data(), p.size() - 1));
    const auto prev = state_of[p[p.size() - 2]];
    if (prev && mu[parent] != 0) mu[node] = mu[parent] * chain.p(*prev, *s);
  }
  std::vector<Rational> w(trie->size());
  for (std::size_t node = 1; node < trie->size(); ++node) w[node] = mu[node] + mu[trie->inverse(node)];
  return WeightTable(std::move(trie), std::move(w));
}

std::vector<SwitchViolation> check_switch(const WeightTable& t) {
  const PathTrie& trie = t.trie();
  const std::size_t edges = t.chart().edge_count();
  std::vector<SwitchViolation> out;
  for (std::size_t node = 1; node < trie.size(); ++node) {
    const Path& p = trie.path(node);
    if (static_cast<int>(p.size()) >= t.depth()) continue;
    Rational right = 0, left = 0;
    for (std::size_t code = 0; code < edges; ++code) {
      const std::size_t r = trie.child(node, static_cast<Edge>(code));
      if (r != PathTrie::npos) right += t.weight(r);
      Path lp{static_cast<Edge>(code)};
      lp.insert(lp.end(), p.begin(), p.end());
      const std::size_t l = trie.find(lp);
      if (l != PathTrie::npos) left += t.weight(l);
    }
    if (right != t.weight(node) || left != t.weight(node)) out.push_back({p, t.weight(node), right, left});
  }
  return out;
}

std::vector<Path> check_flip(const WeightTable& t) {
  std::vector<Path> out;
  for (std::size_t node = 1; node < t.trie().size(); ++node)
    if (t.weight(node) != t.weight(t.trie().inverse(node))) out.push_back(t.trie().path(node));
  return out;
}

Rational length_norm(const WeightTable& t) {
  Rational sum = 0;
  auto [b, e] = t.trie().level(1);
  for (std::size_t node = b; node < e; ++node) sum += t.weight(node);
  return sum / 2;
}

std::vector<Path> default_probes(const PathTrie& trie, int max_length) {
  std::vector<Path> out;
  const int top = std::min(max_length, trie.depth());
  for (std::size_t node = 1; node < trie.level(top).second; ++node) out.push_back(trie.path(node));
  return out;
}

Rational projective_distance(const WeightTable& t1, const WeightTable& t2, std::span<const Path> probes) {
  const Rational n1 = length_norm(t1), n2 = length_norm(t2);
  if (n1 == 0 || n2 == 0) throw InvalidArgument("projective distance needs nonzero length norms");
  Rational best = 0;
  for (const Path& v : probes) {
    Rational d = t1.weight(v) / n1 - t2.weight(v) / n2;
    if (d < 0) d = -d;
    if (d > best) best = d;
  }
  return best;
}

Rational projective_distance(const WeightTable& t1, const WeightTable& t2) {
  const int depth = std::min({t1.depth(), t2.depth(), 3});
  const auto probes = default_probes(t1.trie(), depth);
  return projective_distance(t1, t2, probes);
}

}  // namespace wh
