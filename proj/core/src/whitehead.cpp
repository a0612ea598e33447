#include "wh/whitehead.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "wh/error.hpp"

namespace wh {

namespace {

CyclicWord image_class(const Move& m, const CyclicWord& c) { return m.apply(c); }

}  // namespace

std::vector<std::size_t> Witness::moves() const {
  std::vector<std::size_t> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.move);
  return out;
}

nlohmann::json Witness::to_json(const MoveSet& set) const {
  nlohmann::json j;
  j["source"] = source.str();
  j["target"] = target.str();
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json step = set[s.move].move.to_json();
    step["index"] = s.move;
    step["pre"] = s.pre;
    steps_json.push_back(std::move(step));
  }
  j["steps"] = std::move(steps_json);
  return j;
}

Witness make_witness(const MoveSet& set, const CyclicWord& source, std::span<const std::size_t> moves) {
  Witness w{source, source, {}};
  CyclicWord cur = source;
  for (std::size_t m : moves) {
    if (m >= set.size()) throw InvalidArgument("move index out of range");
    w.steps.push_back({m, cur.fingerprint()});
    cur = image_class(set[m].move, cur);
  }
  w.target = cur;
  return w;
}

void verify_witness(const MoveSet& set, const Witness& w) {
  CyclicWord cur = w.source;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const auto& s = w.steps[i];
    if (s.move >= set.size()) throw WitnessMismatch(i, "move index out of range");
    if (cur.fingerprint() != s.pre)
      throw WitnessMismatch(i, "fingerprint mismatch before step " + std::to_string(i));
    cur = image_class(set[s.move].move, cur);
  }
  if (cur != w.target)
    throw WitnessMismatch(w.steps.size(), "replay ends at " + cur.str() + ", expected " + w.target.str());
}

bool witness_replays(const MoveSet& set, const Witness& w) {
  try {
    verify_witness(set, w);
    return true;
  } catch (const WitnessMismatch&) {
    return false;
  }
}

Witness reverse_witness(const MoveSet& set, const Witness& w) {
  std::vector<std::size_t> moves;
  for (auto it = w.steps.rbegin(); it != w.steps.rend(); ++it) moves.push_back(set[it->move].inverse);
  return make_witness(set, w.target, moves);
}

Witness concat_witness(const Witness& a, const Witness& b) {
  if (a.target != b.source) throw InvalidArgument("witnesses do not compose");
  Witness out{a.source, b.target, a.steps};
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

bool is_whitehead_minimal(const MoveSet& set, const CyclicWord& c) {
  for (const auto& e : set.entries()) {
    if (e.first_kind || e.inner) continue;
    if (e.move.image_length(c) < c.size()) return false;
  }
  return true;
}

Minimization minimize(const MoveSet& set, const CyclicWord& c) {
  std::vector<std::size_t> path;
  CyclicWord cur = c;
  for (;;) {
    std::optional<std::size_t> best;
    std::size_t best_len = cur.size();
    for (const auto& e : set.entries()) {
      if (e.first_kind || e.inner) continue;
      const std::size_t len = e.move.image_length(cur);
      if (len < best_len) {
        best_len = len;
        best = e.index;
      }
    }
    if (!best) break;
    path.push_back(*best);
    cur = image_class(set[*best].move, cur);
  }
  Witness w = make_witness(set, c, path);
  const std::size_t steps = path.size();
  return Minimization{std::move(cur), std::move(w), steps};
}

Minimization speedup_minimize(const MoveSet& set, const CyclicWord& c,
                              const std::vector<std::vector<std::size_t>>& aux) {
  Minimization best = minimize(set, c);
  for (const auto& seq : aux) {
    Witness prefix = make_witness(set, c, seq);
    Minimization m = minimize(set, prefix.target);
    if (m.result.size() < best.result.size() || (m.result.size() == best.result.size() && m.steps < best.steps)) {
      best = Minimization{m.result, concat_witness(prefix, m.witness), m.steps};
    }
  }
  return best;
}

std::optional<std::size_t> LevelComponent::find(const CyclicWord& c) const {
  auto it = index.find(c);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t LevelComponent::topological_edge_count(const MoveSet& set) const {
  std::size_t fixed = 0;
  for (const auto& e : edges)
    if (e.from == e.to && set[e.move].inverse == e.move) ++fixed;
  return (edges.size() + fixed) / 2;
}

std::vector<std::size_t> LevelComponent::tree_path(std::size_t v) const {
  std::vector<std::size_t> moves;
  while (parent[v]) {
    moves.push_back(parent[v]->second);
    v = parent[v]->first;
  }
  std::reverse(moves.begin(), moves.end());
  return moves;
}

LevelComponent level_component(const MoveSet& set, const CyclicWord& c, std::size_t vertex_cap) {
  if (!is_whitehead_minimal(set, c))
    throw InvalidArgument("level_component: '" + c.str() + "' is not Whitehead-minimal");
  LevelComponent comp;
  comp.level = c.size();
  comp.vertices.push_back(c);
  comp.parent.emplace_back();
  comp.index.emplace(c, 0);
  for (std::size_t head = 0; head < comp.vertices.size(); ++head) {
    const CyclicWord u = comp.vertices[head];
    for (const auto& e : set.entries()) {
      if (e.inner) continue;
      if (e.move.image_length(u) != comp.level) continue;
      CyclicWord v = image_class(e.move, u);
      auto [it, inserted] = comp.index.emplace(v, comp.vertices.size());
      if (inserted) {
        if (comp.vertices.size() >= vertex_cap) throw CapExceeded(vertex_cap);
        comp.vertices.push_back(std::move(v));
        comp.parent.emplace_back(std::make_pair(head, e.index));
      }
      comp.edges.push_back({head, it->second, e.index});
    }
  }
  return comp;
}

Equivalence equivalent(const MoveSet& set, const CyclicWord& c1, const CyclicWord& c2,
                       std::size_t vertex_cap) {
  if (c1 == c2) return {true, make_witness(set, c1, {})};
  Minimization m1 = minimize(set, c1);
  Minimization m2 = minimize(set, c2);
  if (m1.result.size() != m2.result.size()) return {false, std::nullopt};
  LevelComponent comp = level_component(set, m1.result, vertex_cap);
  auto target = comp.find(m2.result);
  if (!target) return {false, std::nullopt};
  Witness across = make_witness(set, m1.result, comp.tree_path(*target));
  Witness w = concat_witness(concat_witness(m1.witness, across), reverse_witness(set, m2.witness));
  verify_witness(set, w);
  return {true, std::move(w)};
}

std::vector<Witness> stabilizer_generators(const MoveSet& set, const CyclicWord& c,
                                           std::size_t vertex_cap) {
  LevelComponent comp = level_component(set, c, vertex_cap);
  const std::size_t stride = set.size();
  auto key = [stride](std::size_t vertex, std::size_t move) { return vertex * stride + move; };
  std::unordered_set<std::size_t> done;
  for (std::size_t v = 1; v < comp.vertices.size(); ++v) {
    const auto [p, m] = *comp.parent[v];
    done.insert(key(p, m));
    done.insert(key(v, set[m].inverse));
  }
  std::vector<Witness> loops;
  for (const auto& e : comp.edges) {
    if (done.count(key(e.from, e.move))) continue;
    done.insert(key(e.from, e.move));
    done.insert(key(e.to, set[e.move].inverse));
    std::vector<std::size_t> moves = comp.tree_path(e.from);
    moves.push_back(e.move);
    std::vector<std::size_t> back = comp.tree_path(e.to);
    for (auto it = back.rbegin(); it != back.rend(); ++it) moves.push_back(set[*it].inverse);
    Witness w = make_witness(set, c, moves);
    if (w.target != c) throw WitnessMismatch(moves.size(), "stabilizer loop does not close");
    verify_witness(set, w);
    loops.push_back(std::move(w));
  }
  return loops;
}

std::vector<CyclicWord> orbit_ball(const MoveSet& set, const CyclicWord& c, std::size_t length_cap,
                                   std::size_t vertex_cap) {
  std::vector<CyclicWord> out{c};
  std::unordered_set<CyclicWord> seen{c};
  for (std::size_t head = 0; head < out.size(); ++head) {
    const CyclicWord u = out[head];
    for (const auto& e : set.entries()) {
      if (e.inner || e.move.image_length(u) > length_cap) continue;
      CyclicWord v = image_class(e.move, u);
      if (seen.insert(v).second) {
        if (out.size() >= vertex_cap) throw CapExceeded(vertex_cap);
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

}  // namespace wh
