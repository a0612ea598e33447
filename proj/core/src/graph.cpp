#include "wh/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include <nlohmann/json.hpp>

#include "wh/error.hpp"

namespace wh {

MarkedGraph::MarkedGraph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
                         const std::string& base, const std::vector<std::string>& tree_edges,
                         const std::vector<std::string>& letter_edges)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InvalidArgument("graph has no vertices");
  std::map<std::string, std::size_t> vindex;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (!vindex.emplace(vertices_[i], i).second) throw InvalidArgument("duplicate vertex '" + vertices_[i] + "'");
  auto vertex_of = [&](const std::string& name) {
    auto it = vindex.find(name);
    if (it == vindex.end()) throw InvalidArgument("unknown vertex '" + name + "'");
    return it->second;
  };

  std::map<std::string, const EdgeSpec*> spec_by_id;
  for (const auto& e : edges)
    if (!spec_by_id.emplace(e.id, &e).second) throw InvalidArgument("duplicate edge '" + e.id + "'");
  std::map<std::string, Edge> code_of;
  for (const auto& e : edges) {
    if (code_of.count(e.id)) continue;
    const std::string inv = e.inv.empty() ? e.id + "'" : e.inv;
    if (inv == e.id) throw InvalidArgument("edge '" + e.id + "' is its own inverse");
    if (code_of.count(inv)) throw InvalidArgument("edge '" + inv + "' is already paired");
    if (auto it = spec_by_id.find(inv); it != spec_by_id.end()) {
      const EdgeSpec& s = *it->second;
      if (s.from != e.to || s.to != e.from || (!s.inv.empty() && s.inv != e.id))
        throw InvalidArgument("edges '" + e.id + "' and '" + inv + "' are not mutually inverse");
    }
    if (ids_.size() + 2 > 0xffff) throw InvalidArgument("too many edges");
    const Edge code = static_cast<Edge>(ids_.size());
    code_of[e.id] = code;
    code_of[inv] = edge_inverse(code);
    ids_.push_back(e.id);
    ids_.push_back(inv);
    origin_.push_back(vertex_of(e.from));
    origin_.push_back(vertex_of(e.to));
  }
  auto edge_of = [&](const std::string& id) {
    auto it = code_of.find(id);
    if (it == code_of.end()) throw InvalidArgument("unknown edge '" + id + "'");
    return it->second;
  };

  out_.assign(vertices_.size(), {});
  for (std::size_t e = 0; e < origin_.size(); ++e) out_[origin_[e]].push_back(static_cast<Edge>(e));

  const long betti = static_cast<long>(origin_.size() / 2) - static_cast<long>(vertices_.size()) + 1;
  if (betti < kMinRank || betti > kMaxRank)
    throw InvalidArgument("first Betti number " + std::to_string(betti) + " outside [2, 26]");
  rank_ = static_cast<int>(betti);

  tree_.assign(origin_.size(), false);
  tree_adj_.assign(vertices_.size(), {});
  for (const auto& id : tree_edges) {
    const Edge e = edge_of(id);
    if (tree_[e]) throw InvalidArgument("tree edge '" + id + "' listed twice");
    tree_[e] = tree_[edge_inverse(e)] = true;
    tree_adj_[origin(e)].push_back({terminus(e), e});
    tree_adj_[terminus(e)].push_back({origin(e), edge_inverse(e)});
  }
  if (tree_edges.size() + 1 != vertices_.size())
    throw InvalidArgument("spanning tree needs exactly V - 1 edges");
  {
    std::vector<bool> seen(vertices_.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (auto [v, e] : tree_adj_[u])
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
    }
    if (count != vertices_.size()) throw InvalidArgument("tree edges do not span the graph");
  }

  letter_.assign(origin_.size(), std::nullopt);
  letter_edge_.assign(static_cast<std::size_t>(2 * rank_), 0);
  if (static_cast<int>(letter_edges.size()) != rank_)
    throw InvalidArgument("expected " + std::to_string(rank_) + " letter edges");
  for (int i = 0; i < rank_; ++i) {
    const Edge e = edge_of(letter_edges[static_cast<std::size_t>(i)]);
    if (tree_[e]) throw InvalidArgument("letter edge '" + ids_[e] + "' is a tree edge");
    if (letter_[e]) throw InvalidArgument("letter edge '" + ids_[e] + "' listed twice");
    letter_[e] = Letter::generator(i);
    letter_[edge_inverse(e)] = Letter::generator(i, true);
    letter_edge_[static_cast<std::size_t>(2 * i)] = e;
    letter_edge_[static_cast<std::size_t>(2 * i + 1)] = edge_inverse(e);
  }
  base_ = vertex_of(base.empty() ? vertices_.front() : base);
}

MarkedGraph MarkedGraph::rose(int rank) {
  if (rank < kMinRank || rank > kMaxRank) throw InvalidArgument("rank outside [2, 26]");
  std::vector<EdgeSpec> edges;
  std::vector<std::string> letters;
  for (int i = 0; i < rank; ++i) {
    const std::string a(1, Letter::generator(i).to_char()), A(1, Letter::generator(i, true).to_char());
    edges.push_back({a, A, "x0", "x0"});
    letters.push_back(a);
  }
  return MarkedGraph({"x0"}, edges, "x0", {}, letters);
}

MarkedGraph MarkedGraph::from_json(const nlohmann::json& j) {
  try {
    std::vector<EdgeSpec> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at("id").get<std::string>(), e.value("inv", std::string()), e.at("from").get<std::string>(),
                       e.at("to").get<std::string>()});
    return MarkedGraph(j.at("vertices").get<std::vector<std::string>>(), edges, j.value("base", std::string()),
                       j.value("tree_edges", std::vector<std::string>{}),
                       j.at("letter_edges").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("graph JSON: ") + ex.what());
  }
}

nlohmann::json MarkedGraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t e = 0; e < origin_.size(); ++e)
    edges.push_back({{"id", ids_[e]},
                     {"inv", ids_[edge_inverse(static_cast<Edge>(e))]},
                     {"from", vertices_[origin_[e]]},
                     {"to", vertices_[terminus(static_cast<Edge>(e))]}});
  std::vector<std::string> tree, letters;
  for (std::size_t e = 0; e < origin_.size(); e += 2)
    if (tree_[e]) tree.push_back(ids_[e]);
  for (int i = 0; i < rank_; ++i) letters.push_back(ids_[letter_edge_[static_cast<std::size_t>(2 * i)]]);
  return {{"vertices", vertices_}, {"edges", edges}, {"base", vertices_[base_]}, {"tree_edges", tree},
          {"letter_edges", letters}};
}

std::optional<Edge> MarkedGraph::find_edge(const std::string& id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<Edge>(it - ids_.begin());
}

std::vector<std::string> MarkedGraph::warnings() const {
  std::vector<std::string> out;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (degree(v) < 3) out.push_back("vertex '" + vertices_[v] + "' has degree " + std::to_string(degree(v)));
  if (origin_.size() > static_cast<std::size_t>(6 * rank_))
    out.push_back("#E = " + std::to_string(origin_.size()) + " exceeds 6N");
  return out;
}

Path MarkedGraph::tree_path(std::size_t u, std::size_t v) const {
  std::vector<std::optional<std::pair<std::size_t, Edge>>> prev(vertices_.size());
  std::vector<bool> seen(vertices_.size(), false);
  std::deque<std::size_t> queue{u};
  seen[u] = true;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    if (x == v) break;
    for (auto [y, e] : tree_adj_[x])
      if (!seen[y]) {
        seen[y] = true;
        prev[y] = std::make_pair(x, e);
        queue.push_back(y);
      }
  }
  Path p;
  for (std::size_t x = v; x != u; x = prev[x]->first) p.push_back(prev[x]->second);
  std::reverse(p.begin(), p.end());
  return p;
}

bool MarkedGraph::is_path(std::span<const Edge> p) const {
  for (Edge e : p)
    if (e >= origin_.size()) return false;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (terminus(p[i - 1]) != origin(p[i])) return false;
  return true;
}

bool MarkedGraph::is_reduced(std::span<const Edge> p) const {
  if (!is_path(p)) return false;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] == edge_inverse(p[i - 1])) return false;
  return true;
}

bool MarkedGraph::is_closed(std::span<const Edge> p) const {
  return !p.empty() && is_path(p) && terminus(p.back()) == origin(p.front());
}

bool MarkedGraph::is_cyclically_reduced(std::span<const Edge> p) const {
  return is_closed(p) && is_reduced(p) && (p.size() < 2 || p.front() != edge_inverse(p.back()));
}

Path MarkedGraph::path_of_word(const Word& w) const {
  Path raw;
  for (Letter x : w.letters()) {
    if (x.index() >= rank_) throw InvalidArgument("letter outside graph rank");
    const Edge e = letter_edge(x);
    for (Edge t : tree_path(base_, origin(e))) raw.push_back(t);
    raw.push_back(e);
    for (Edge t : tree_path(terminus(e), base_)) raw.push_back(t);
  }
  return reduce_path(raw);
}

std::string MarkedGraph::path_str(std::span<const Edge> p) const {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i && !is_rose()) s += ' ';
    s += ids_[p[i]];
  }
  return s;
}

Path reverse_path(std::span<const Edge> p) {
  Path out(p.rbegin(), p.rend());
  for (Edge& e : out) e = edge_inverse(e);
  return out;
}

Path reduce_path(std::span<const Edge> p) {
  Path out;
  out.reserve(p.size());
  for (Edge e : p) {
    if (!out.empty() && out.back() == edge_inverse(e))
      out.pop_back();
    else
      out.push_back(e);
  }
  return out;
}

Path cyc(std::span<const Edge> p) {
  std::size_t i = 0, j = p.size();
  while (j - i >= 2 && p[i] == edge_inverse(p[j - 1])) {
    ++i;
    --j;
  }
  return Path(p.begin() + static_cast<std::ptrdiff_t>(i), p.begin() + static_cast<std::ptrdiff_t>(j));
}

std::vector<Edge> chain_edges(const Fsmc& chain, const MarkedGraph& g) {
  std::vector<Edge> out;
  for (const auto& s : chain.states()) {
    auto e = g.find_edge(s);
    if (!e) throw InvalidArgument("state '" + s + "' is not an edge of the graph");
    out.push_back(*e);
  }
  return out;
}

std::vector<Violation> validate_gamma_based(const Fsmc& chain, const MarkedGraph& g) {
  std::vector<Violation> out;
  if (chain.size() < 2) out.push_back({"fewer than two states"});
  std::vector<std::optional<Edge>> edges;
  for (const auto& s : chain.states()) {
    edges.push_back(g.find_edge(s));
    if (!edges.back()) out.push_back({"state '" + s + "' is not an edge"});
  }
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = 0; j < chain.size(); ++j) {
      if (chain.p(i, j) == 0 || !edges[i] || !edges[j]) continue;
      if (g.terminus(*edges[i]) != g.origin(*edges[j]))
        out.push_back({"transition " + chain.state(i) + " -> " + chain.state(j) + " is not composable"});
      else if (*edges[j] == edge_inverse(*edges[i]))
        out.push_back({"transition " + chain.state(i) + " -> " + chain.state(j) + " backtracks"});
    }
  return out;
}

ClosingSystem::ClosingSystem(const MarkedGraph& g) : n_(g.edge_count()), table_(n_ * n_) {
  for (std::size_t start = 0; start < n_; ++start) {
    // States are last edges; the vertex is the terminus of the state.
    std::vector<long> dist(n_, -1);
    std::vector<Edge> prev(n_, 0);
    std::vector<Edge> order;
    std::deque<Edge> queue{static_cast<Edge>(start)};
    dist[start] = 0;
    while (!queue.empty()) {
      const Edge f = queue.front();
      queue.pop_front();
      order.push_back(f);
      for (Edge h : g.out_edges(g.terminus(f))) {
        if (h == edge_inverse(f) || dist[h] >= 0) continue;
        dist[h] = dist[f] + 1;
        prev[h] = f;
        queue.push_back(h);
      }
    }
    for (std::size_t target = 0; target < n_; ++target) {
      const Edge e2 = static_cast<Edge>(target);
      std::optional<Edge> goal;
      for (Edge f : order)
        if (g.terminus(f) == g.origin(e2) && e2 != edge_inverse(f)) {
          goal = f;
          break;
        }
      if (!goal)
        throw NoClosingPath("no closing path from " + g.edge_id(static_cast<Edge>(start)) + " to " + g.edge_id(e2));
      Path beta;
      for (Edge f = *goal; f != start; f = prev[f]) beta.push_back(f);
      std::reverse(beta.begin(), beta.end());
      max_len_ = std::max(max_len_, beta.size());
      table_[start * n_ + target] = std::move(beta);
    }
  }
}

Path hat_closing(std::span<const Edge> path, const ClosingSystem& B) {
  if (path.empty()) throw InvalidArgument("closing needs a nonempty path");
  Path out(path.begin(), path.end());
  const Path& beta = B.beta(path.back(), path.front());
  out.insert(out.end(), beta.begin(), beta.end());
  return out;
}

Path breve_closing(std::span<const Edge> path, const MarkedGraph& g, const ClosingSystem& B) {
  if (path.empty()) throw InvalidArgument("closing needs a nonempty path");
  if (g.is_closed(path)) return cyc(path);
  return hat_closing(path, B);
}

CyclicWord path_to_class(std::span<const Edge> closed, const MarkedGraph& g) {
  if (!g.is_closed(closed)) throw InvalidArgument("path_to_class needs a closed path");
  std::vector<Letter> letters;
  letters.reserve(closed.size());
  for (Edge e : closed)
    if (auto x = g.letter(e)) letters.push_back(*x);
  auto red = cyclic_reduce(free_reduce(letters));
  if (!red.cls) throw Degenerate("closed path " + g.path_str(closed) + " represents the trivial class");
  return *std::move(red.cls);
}

bool quasi_inverted(std::span<const Edge> path) {
  const std::size_t n = path.size();
  const auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  if (m == 0) return false;
  for (std::size_t i = 0; i < m; ++i)
    if (path[i] != edge_inverse(path[n - 1 - i])) return false;
  return true;
}

namespace {

Fsmc uniform_chain(const MarkedGraph& g, const std::vector<Edge>& states) {
  std::vector<std::string> names;
  for (Edge e : states) names.push_back(g.edge_id(e));
  std::vector<std::vector<Rational>> rows;
  for (Edge e : states) {
    std::vector<std::size_t> succ;
    for (std::size_t j = 0; j < states.size(); ++j)
      if (g.origin(states[j]) == g.terminus(e) && states[j] != edge_inverse(e)) succ.push_back(j);
    if (succ.empty()) throw InvalidArgument("state " + g.edge_id(e) + " has no successor");
    std::vector<Rational> row(states.size(), 0);
    for (std::size_t j : succ) row[j] = Rational(1, static_cast<unsigned long>(succ.size()));
    rows.push_back(std::move(row));
  }
  return Fsmc(std::move(names), std::move(rows));
}

std::vector<Edge> all_edges(const MarkedGraph& g) {
  std::vector<Edge> out;
  for (std::size_t e = 0; e < g.edge_count(); ++e) out.push_back(static_cast<Edge>(e));
  return out;
}

}  // namespace

std::vector<std::string> preset_names() { return {"rose2", "rose-positive", "lollipop", "chart-example2"}; }

Preset make_preset(const std::string& name, int rank) {
  if (name == "rose2") {
    auto g = std::make_shared<const MarkedGraph>(MarkedGraph::rose(rank));
    return {name, g, uniform_chain(*g, all_edges(*g))};
  }
  if (name == "rose-positive") {
    auto g = std::make_shared<const MarkedGraph>(MarkedGraph::rose(rank));
    std::vector<Edge> positive;
    for (int i = 0; i < rank; ++i) positive.push_back(g->letter_edge(Letter::generator(i)));
    return {name, g, uniform_chain(*g, positive)};
  }
  if (name == "lollipop") {
    std::vector<std::string> vertices{"x0"};
    std::vector<MarkedGraph::EdgeSpec> edges;
    std::vector<std::string> tree, letters;
    for (int i = 1; i <= rank; ++i) {
      const std::string k = std::to_string(i), y = "y" + k;
      vertices.push_back(y);
      edges.push_back({"e" + k, "E" + k, "x0", y});
      edges.push_back({"f" + k, "F" + k, y, y});
      tree.push_back("e" + k);
      letters.push_back("f" + k);
    }
    auto g = std::make_shared<const MarkedGraph>(MarkedGraph(vertices, edges, "x0", tree, letters));
    std::vector<Edge> states;
    for (Edge e : all_edges(*g))
      if (g->edge_id(e)[0] != 'F') states.push_back(e);
    return {name, g, uniform_chain(*g, states)};
  }
  if (name == "chart-example2") {
    std::vector<MarkedGraph::EdgeSpec> edges{
        {"e1", "E1", "x", "y"}, {"e2", "E2", "x", "y"}, {"e3", "E3", "x", "y"}};
    auto g = std::make_shared<const MarkedGraph>(MarkedGraph({"x", "y"}, edges, "x", {"e1"}, {"e2", "e3"}));
    return {name, g, uniform_chain(*g, all_edges(*g))};
  }
  throw InvalidArgument("unknown preset '" + name + "'");
}

}  // namespace wh
