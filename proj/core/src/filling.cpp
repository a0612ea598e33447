#include "wh/filling.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "wh/error.hpp"

namespace wh {

namespace {

using json = nlohmann::json;

json path_json(const MarkedGraph& g, std::span<const Edge> p) {
  json a = json::array();
  for (Edge e : p) a.push_back(g.edge_id(e));
  return a;
}

Path path_from_json(const MarkedGraph& g, const json& a) {
  Path p;
  for (const auto& id : a) {
    auto e = g.find_edge(id.get<std::string>());
    if (!e) throw InvalidArgument("unknown edge " + id.get<std::string>());
    p.push_back(*e);
  }
  return p;
}

Path power(std::span<const Edge> w, int n) {
  Path p;
  for (int i = 0; i < n; ++i) p.insert(p.end(), w.begin(), w.end());
  return p;
}

bool window_at(std::span<const Letter> w, std::span<const Letter> v, std::size_t at) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (w[(at + j) % w.size()] != v[j]) return false;
  return true;
}

std::optional<std::size_t> find_window(std::span<const Letter> w, std::span<const Letter> v) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (window_at(w, v, i)) return i;
  return std::nullopt;
}

int word_rank(const CyclicWord& c, int rank) {
  const int r = rank > 0 ? rank : rank_of(c.letters());
  for (Letter x : c.letters())
    if (x.index() >= r) throw InvalidArgument("word uses letters outside rank " + std::to_string(r));
  return r;
}

FillingVerdict three_subword(const CyclicWord& c, int rank) {
  const int r = word_rank(c, rank);
  const CyclicWord inv = c.inverse();
  json occ = json::array();
  for (const Word& v : reduced_words(r, 3)) {
    if (auto i = find_window(c.letters(), v.letters()))
      occ.push_back({{"v", v.str()}, {"in", "w"}, {"at", *i}});
    else if (auto k = find_window(inv.letters(), v.letters()))
      occ.push_back({{"v", v.str()}, {"in", "w^-1"}, {"at", *k}});
    else
      return Inconclusive{"length-3 word " + v.str() + " occurs in neither w nor w^-1"};
  }
  FillingCertificate cert{FillingMethod::ThreeSubword, true, 3, 0, {}};
  cert.evidence = {{"word", c.str()}, {"rank", r}, {"occurrences", std::move(occ)}};
  return cert;
}

std::vector<std::string> verify_three_subword(const json& ev, const CyclicWord& c, int rank) {
  std::vector<std::string> bad;
  if (ev.at("word").get<std::string>() != c.str()) bad.push_back("certificate is for a different word");
  const int r = word_rank(c, rank);
  if (ev.at("rank").get<int>() != r) bad.push_back("rank mismatch");
  const CyclicWord inv = c.inverse();
  std::map<std::string, json> by_word;
  for (const auto& o : ev.at("occurrences")) by_word[o.at("v").get<std::string>()] = o;
  for (const Word& v : reduced_words(r, 3)) {
    auto it = by_word.find(v.str());
    if (it == by_word.end()) {
      bad.push_back("no occurrence listed for " + v.str());
      continue;
    }
    const auto& o = it->second;
    const CyclicWord& host = o.at("in").get<std::string>() == "w" ? c : inv;
    const auto at = o.at("at").get<std::size_t>();
    if (at >= host.size() || !window_at(host.letters(), v.letters(), at))
      bad.push_back("listed occurrence of " + v.str() + " does not match");
  }
  return bad;
}

// Closed paths whose powers the basis criterion needs: cyc of a_i and of a_i a_j.
std::vector<std::pair<std::string, Path>> basis_paths(const MarkedGraph& g) {
  std::vector<std::pair<std::string, Path>> out;
  const int n = g.rank();
  for (int i = 0; i < n; ++i) {
    const Word w = Word::parse(std::string(1, Letter::generator(i).to_char()));
    out.emplace_back(w.str(), cyc(g.path_of_word(w)));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::string s{Letter::generator(i).to_char(), Letter::generator(j).to_char()};
      out.emplace_back(s, cyc(g.path_of_word(Word::parse(s))));
    }
  return out;
}

json power_item(const WeightTable& t, const std::string& label, std::span<const Edge> w, int n) {
  const Path p = power(w, n);
  return {{"label", label}, {"path", path_json(t.chart(), p)}, {"n", n}, {"weight", to_string(t.weight(p))}};
}

// Positive-weight powers z^n with n|z| <= depth; nullopt reason when one fails.
std::optional<std::string> collect_powers(const WeightTable& t, const std::string& label, std::span<const Edge> z,
                                          json& items) {
  if (z.empty()) return "empty path for " + label;
  if (static_cast<int>(z.size()) > t.depth())
    return "table depth " + std::to_string(t.depth()) + " is shorter than the path for " + label;
  for (int n = 1; n * static_cast<int>(z.size()) <= t.depth(); ++n) {
    items.push_back(power_item(t, label, z, n));
    if (t.weight(power(z, n)) <= 0) return label + "^" + std::to_string(n) + " has zero weight";
  }
  return std::nullopt;
}

std::vector<std::string> verify_items(const WeightTable& t, const json& items,
                                      const std::vector<std::pair<std::string, Path>>& required) {
  std::vector<std::string> bad;
  std::set<std::pair<std::string, int>> seen;
  for (const auto& it : items) {
    const Path p = path_from_json(t.chart(), it.at("path"));
    const auto label = it.at("label").get<std::string>();
    const int n = it.at("n").get<int>();
    const Rational w = parse_rational(it.at("weight").get<std::string>());
    if (!t.chart().is_reduced(p) || static_cast<int>(p.size()) > t.depth()) {
      bad.push_back("listed path for " + label + " is outside the table");
      continue;
    }
    if (t.weight(p) != w) bad.push_back("weight mismatch for " + label);
    if (w <= 0) bad.push_back("nonpositive weight for " + label);
    seen.emplace(label, n);
  }
  for (const auto& [label, z] : required)
    for (int n = 1; n * static_cast<int>(z.size()) <= t.depth(); ++n)
      if (!seen.count({label, n})) bad.push_back("missing " + label + "^" + std::to_string(n));
  return bad;
}

// Transitions used by every power of the closed path w (w^2 covers them all).
std::vector<std::pair<Edge, Edge>> cyclic_transitions(std::span<const Edge> w) {
  std::vector<std::pair<Edge, Edge>> out;
  for (std::size_t i = 0; i < w.size(); ++i) out.emplace_back(w[i], w[(i + 1) % w.size()]);
  return out;
}

class ChainView {
 public:
  ChainView(const Fsmc& chain, const MarkedGraph& g) : chain_(chain), g_(g), state_(g.edge_count()) {
    const auto edges = chain_edges(chain, g);
    for (std::size_t s = 0; s < edges.size(); ++s) state_[edges[s]] = s;
  }
  bool has(Edge e) const { return state_[e].has_value(); }
  Rational p(Edge e, Edge f) const {
    if (!has(e) || !has(f)) return 0;
    return chain_.p(*state_[e], *state_[f]);
  }
  json transition(Edge e, Edge f) const {
    return {{"from", g_.edge_id(e)}, {"to", g_.edge_id(f)}, {"p", to_string(p(e, f))}};
  }
  std::size_t state_count() const { return chain_.size(); }

 private:
  const Fsmc& chain_;
  const MarkedGraph& g_;
  std::vector<std::optional<std::size_t>> state_;
};

std::vector<std::pair<Edge, Edge>> case1_required(const MarkedGraph& g) {
  std::vector<std::pair<Edge, Edge>> out;
  for (std::size_t code = 0; code < g.edge_count(); ++code) {
    const auto e = static_cast<Edge>(code);
    for (Edge f : g.out_edges(g.terminus(e)))
      if (f != edge_inverse(e)) out.emplace_back(e, f);
  }
  return out;
}

std::vector<std::pair<Edge, Edge>> case2_required(const MarkedGraph& g) {
  std::vector<std::pair<Edge, Edge>> out;
  for (int i = 0; i < g.rank(); ++i)
    for (int j = 0; j < g.rank(); ++j)
      out.emplace_back(g.letter_edge(Letter::generator(i)), g.letter_edge(Letter::generator(j)));
  return out;
}

std::optional<std::string> check_transitions(const ChainView& cv, const std::vector<std::pair<Edge, Edge>>& req,
                                             const MarkedGraph& g, json& out) {
  for (auto [e, f] : req) {
    if (cv.p(e, f) <= 0) return "p(" + g.edge_id(e) + ", " + g.edge_id(f) + ") is zero";
    out.push_back(cv.transition(e, f));
  }
  return std::nullopt;
}

bool cyclically_positive(const ChainView& cv, std::span<const Edge> w) {
  for (auto [e, f] : cyclic_transitions(w))
    if (cv.p(e, f) <= 0) return false;
  return true;
}

// Characteristic weight mu0[k](p) + mu0[k](p^-1) of an arbitrary reduced path.
class CylinderWeights {
 public:
  CylinderWeights(const Fsmc& chain, const MarkedGraph& g)
      : chain_(chain), mu_(stationary(chain)), state_(g.edge_count()) {
    const auto edges = chain_edges(chain, g);
    for (std::size_t s = 0; s < edges.size(); ++s) state_[edges[s]] = s;
  }
  Rational operator()(std::span<const Edge> p) const { return one_way(p) + one_way(reverse_path(p)); }

 private:
  Rational one_way(std::span<const Edge> p) const {
    std::vector<std::size_t> v;
    for (Edge e : p) {
      if (!state_[e]) return 0;
      v.push_back(*state_[e]);
    }
    return mu0_k(chain_, mu_, v);
  }
  const Fsmc& chain_;
  std::vector<Rational> mu_;
  std::vector<std::optional<std::size_t>> state_;
};

FillingVerdict word_power_chain(const Fsmc& chain, const MarkedGraph& g, const FillingOptions& opt, int bound) {
  if (!opt.word) throw InvalidArgument("word-power needs a word");
  const Path& z = *opt.word;
  if (!g.is_cyclically_reduced(z)) throw InvalidArgument("word-power path is not cyclically reduced");
  if (bound < 1) throw InvalidArgument("power bound must be >= 1");
  auto sub = three_subword(path_to_class(z, g), g.rank());
  if (auto* inc = std::get_if<Inconclusive>(&sub)) return Inconclusive{"word is not certified filling: " + inc->reason};
  const CylinderWeights weight(chain, g);
  json items = json::array();
  for (int n = 1; n <= bound; ++n) {
    const Rational w = weight(power(z, n));
    items.push_back({{"label", "z"}, {"n", n}, {"weight", to_string(w)}});
    if (w <= 0) return Inconclusive{"z^" + std::to_string(n) + " has zero weight"};
  }
  FillingCertificate cert{FillingMethod::WordPower, false, bound, 0, {}};
  cert.evidence = {{"path", path_json(g, z)},
                   {"filling", std::get<FillingCertificate>(sub).to_json()},
                   {"power_bound", bound},
                   {"items", items}};
  return cert;
}

FillingVerdict fsmc_case(const Fsmc& chain, const MarkedGraph& g, int which, const FillingOptions& opt) {
  const ChainView cv(chain, g);
  FillingCertificate cert{FillingMethod::FsmcXF, true, 0, which, {}};
  json transitions = json::array();
  switch (which) {
    case 1: {
      if (cv.state_count() != g.edge_count()) return Inconclusive{"case 1 needs every edge as a state"};
      if (auto why = check_transitions(cv, case1_required(g), g, transitions)) return Inconclusive{*why};
      cert.evidence = {{"transitions", transitions}};
      return cert;
    }
    case 2: {
      if (!g.is_rose()) return Inconclusive{"case 2 needs a rose chart"};
      if (auto why = check_transitions(cv, case2_required(g), g, transitions)) return Inconclusive{*why};
      cert.evidence = {{"transitions", transitions}};
      return cert;
    }
    case 3: {
      if (!opt.xf_path) return Inconclusive{"case 3 needs a closed path"};
      const Path& w = *opt.xf_path;
      if (!g.is_cyclically_reduced(w)) throw InvalidArgument("case 3 path is not cyclically reduced");
      auto sub = three_subword(path_to_class(w, g), g.rank());
      if (auto* inc = std::get_if<Inconclusive>(&sub)) return Inconclusive{"path is not certified filling: " + inc->reason};
      if (auto why = check_transitions(cv, cyclic_transitions(w), g, transitions)) return Inconclusive{*why};
      cert.evidence = {{"path", path_json(g, w)},
                       {"filling", std::get<FillingCertificate>(sub).to_json()},
                       {"transitions", transitions}};
      return cert;
    }
    case 4: {
      json paths = json::array();
      for (auto& [label, w] : basis_paths(g)) {
        // Weights are flip-symmetric, so either orientation carries the power.
        Path chosen = w;
        if (!cyclically_positive(cv, chosen)) chosen = reverse_path(w);
        json tr = json::array();
        if (auto why = check_transitions(cv, cyclic_transitions(chosen), g, tr))
          return Inconclusive{"closed path for " + label + ": " + *why};
        paths.push_back({{"label", label}, {"path", path_json(g, chosen)}, {"transitions", tr}});
      }
      cert.evidence = {{"paths", paths}};
      return cert;
    }
    default:
      throw InvalidArgument("FsmcXF case must be 1..4");
  }
}

std::vector<std::string> verify_transitions(const ChainView& cv, const MarkedGraph& g, const json& listed,
                                            const std::vector<std::pair<Edge, Edge>>& req) {
  std::vector<std::string> bad;
  std::set<std::pair<Edge, Edge>> seen;
  for (const auto& t : listed) {
    const auto e = g.find_edge(t.at("from").get<std::string>());
    const auto f = g.find_edge(t.at("to").get<std::string>());
    if (!e || !f) {
      bad.push_back("unknown edge in transition");
      continue;
    }
    const Rational p = parse_rational(t.at("p").get<std::string>());
    if (cv.p(*e, *f) != p) bad.push_back("transition probability mismatch at " + g.edge_id(*e) + g.edge_id(*f));
    if (p <= 0) bad.push_back("zero transition listed");
    seen.emplace(*e, *f);
  }
  for (const auto& r : req)
    if (!seen.count(r)) bad.push_back("missing transition " + g.edge_id(r.first) + " -> " + g.edge_id(r.second));
  return bad;
}

void append(std::vector<std::string>& out, std::vector<std::string> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

}  // namespace

std::string to_string(FillingMethod m) {
  switch (m) {
    case FillingMethod::ThreeSubword: return "three-subword";
    case FillingMethod::FullSupportDepth: return "full-support-depth";
    case FillingMethod::BasisPairs: return "basis-pairs";
    case FillingMethod::WordPower: return "word-power";
    case FillingMethod::FsmcXF: return "fsmc-xf";
  }
  return "?";
}

FillingMethod parse_filling_method(const std::string& name) {
  for (auto m : {FillingMethod::ThreeSubword, FillingMethod::FullSupportDepth, FillingMethod::BasisPairs,
                 FillingMethod::WordPower, FillingMethod::FsmcXF})
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown filling method " + name);
}

json FillingCertificate::to_json() const {
  json j = {{"method", to_string(method)}, {"conclusive", conclusive}, {"evidence", evidence}};
  if (method != FillingMethod::FsmcXF && method != FillingMethod::ThreeSubword) j["depth"] = depth;
  if (method == FillingMethod::FsmcXF) j["case"] = xf_case;
  return j;
}

FillingVerdict certify_filling(const CyclicWord& c, FillingMethod method, int rank) {
  if (method != FillingMethod::ThreeSubword) throw InvalidArgument("a single word supports three-subword only");
  return three_subword(c, rank);
}

FillingVerdict certify_filling(const Fsmc& chain, std::shared_ptr<const MarkedGraph> g, FillingMethod method,
                               const FillingOptions& opt, int depth) {
  if (auto v = validate_gamma_based(chain, *g); !v.empty()) throw InvalidArgument("chain is not Gamma-based: " + v[0].detail);
  if (!is_irreducible(chain)) throw NotIrreducible();
  if (method == FillingMethod::ThreeSubword) throw InvalidArgument("three-subword applies to words");
  if (method == FillingMethod::WordPower) return word_power_chain(chain, *g, opt, depth);
  if (method != FillingMethod::FsmcXF) return certify_filling(characteristic_current(chain, g, depth), method, opt);
  if (opt.xf_case) return fsmc_case(chain, *g, *opt.xf_case, opt);
  std::string reasons;
  for (int which : {1, 2, 4, 3}) {
    auto v = fsmc_case(chain, *g, which, opt);
    if (std::holds_alternative<FillingCertificate>(v)) return v;
    reasons += (reasons.empty() ? "" : "; ") + std::string("case ") + std::to_string(which) + ": " +
               std::get<Inconclusive>(v).reason;
  }
  return Inconclusive{reasons};
}

FillingVerdict certify_filling(const WeightTable& t, FillingMethod method, const FillingOptions& opt) {
  const PathTrie& trie = t.trie();
  FillingCertificate cert{method, false, t.depth(), 0, {}};
  switch (method) {
    case FillingMethod::FullSupportDepth: {
      Rational least = -1;
      for (std::size_t node = 1; node < trie.size(); ++node) {
        if (t.weight(node) <= 0) return Inconclusive{"zero weight on " + t.chart().path_str(trie.path(node))};
        if (least < 0 || t.weight(node) < least) least = t.weight(node);
      }
      cert.evidence = {{"paths", trie.size() - 1}, {"min_weight", to_string(least)}};
      return cert;
    }
    case FillingMethod::BasisPairs: {
      json items = json::array();
      for (auto& [label, w] : basis_paths(t.chart()))
        if (auto why = collect_powers(t, label, w, items)) return Inconclusive{*why};
      cert.evidence = {{"items", items}};
      return cert;
    }
    case FillingMethod::WordPower: {
      if (!opt.word) throw InvalidArgument("word-power needs a word");
      const Path& z = *opt.word;
      if (!t.chart().is_cyclically_reduced(z)) throw InvalidArgument("word-power path is not cyclically reduced");
      auto sub = three_subword(path_to_class(z, t.chart()), t.chart().rank());
      if (auto* inc = std::get_if<Inconclusive>(&sub)) return Inconclusive{"word is not certified filling: " + inc->reason};
      json items = json::array();
      if (auto why = collect_powers(t, "z", z, items)) return Inconclusive{*why};
      cert.evidence = {{"path", path_json(t.chart(), z)},
                       {"filling", std::get<FillingCertificate>(sub).to_json()},
                       {"items", items}};
      return cert;
    }
    default:
      throw InvalidArgument(to_string(method) + " does not apply to a weight table");
  }
}

std::vector<std::string> verify_certificate(const FillingCertificate& cert, const CyclicWord& c, int rank) {
  if (cert.method != FillingMethod::ThreeSubword) return {"not a three-subword certificate"};
  return verify_three_subword(cert.evidence, c, rank);
}

std::vector<std::string> verify_certificate(const FillingCertificate& cert, const Fsmc& chain, const MarkedGraph& g) {
  const json& ev = cert.evidence;
  std::vector<std::string> bad;
  if (cert.method == FillingMethod::WordPower) {
    const Path z = path_from_json(g, ev.at("path"));
    if (!g.is_cyclically_reduced(z)) return {"word is not cyclically reduced"};
    append(bad, verify_three_subword(ev.at("filling").at("evidence"), path_to_class(z, g), g.rank()));
    const CylinderWeights weight(chain, g);
    const int bound = ev.at("power_bound").get<int>();
    if (bound != cert.depth) bad.push_back("power bound mismatch");
    std::set<int> seen;
    for (const auto& it : ev.at("items")) {
      const int n = it.at("n").get<int>();
      const Rational w = parse_rational(it.at("weight").get<std::string>());
      if (n < 1 || weight(power(z, n)) != w) bad.push_back("weight mismatch for z^" + std::to_string(n));
      if (w <= 0) bad.push_back("nonpositive weight for z^" + std::to_string(n));
      seen.insert(n);
    }
    for (int n = 1; n <= bound; ++n)
      if (!seen.count(n)) bad.push_back("missing z^" + std::to_string(n));
    return bad;
  }
  if (cert.method != FillingMethod::FsmcXF) return {"not an FsmcXF or word-power certificate"};
  const ChainView cv(chain, g);
  switch (cert.xf_case) {
    case 1:
      if (cv.state_count() != g.edge_count()) bad.push_back("states do not cover every edge");
      append(bad, verify_transitions(cv, g, ev.at("transitions"), case1_required(g)));
      break;
    case 2:
      if (!g.is_rose()) bad.push_back("chart is not a rose");
      append(bad, verify_transitions(cv, g, ev.at("transitions"), case2_required(g)));
      break;
    case 3: {
      const Path w = path_from_json(g, ev.at("path"));
      if (!g.is_cyclically_reduced(w)) {
        bad.push_back("path is not cyclically reduced");
        break;
      }
      const auto& sub = ev.at("filling");
      FillingCertificate s{FillingMethod::ThreeSubword, true, 3, 0, sub.at("evidence")};
      append(bad, verify_three_subword(s.evidence, path_to_class(w, g), g.rank()));
      append(bad, verify_transitions(cv, g, ev.at("transitions"), cyclic_transitions(w)));
      break;
    }
    case 4: {
      std::map<std::string, Path> listed;
      std::map<std::string, json> tr;
      for (const auto& p : ev.at("paths")) {
        listed[p.at("label").get<std::string>()] = path_from_json(g, p.at("path"));
        tr[p.at("label").get<std::string>()] = p.at("transitions");
      }
      for (auto& [label, w] : basis_paths(g)) {
        auto it = listed.find(label);
        if (it == listed.end()) {
          bad.push_back("missing closed path for " + label);
          continue;
        }
        if (it->second != w && it->second != reverse_path(w)) bad.push_back("wrong closed path for " + label);
        append(bad, verify_transitions(cv, g, tr[label], cyclic_transitions(it->second)));
      }
      break;
    }
    default:
      bad.push_back("unknown case");
  }
  return bad;
}

std::vector<std::string> verify_certificate(const FillingCertificate& cert, const WeightTable& t) {
  std::vector<std::string> bad;
  if (cert.depth != t.depth()) bad.push_back("depth mismatch");
  const json& ev = cert.evidence;
  switch (cert.method) {
    case FillingMethod::FullSupportDepth: {
      if (ev.at("paths").get<std::size_t>() != t.trie().size() - 1) bad.push_back("path count mismatch");
      Rational least = -1;
      for (std::size_t node = 1; node < t.trie().size(); ++node)
        if (least < 0 || t.weight(node) < least) least = t.weight(node);
      if (least <= 0) bad.push_back("table has a zero weight");
      if (to_string(least) != ev.at("min_weight").get<std::string>()) bad.push_back("minimum weight mismatch");
      break;
    }
    case FillingMethod::BasisPairs:
      append(bad, verify_items(t, ev.at("items"), basis_paths(t.chart())));
      break;
    case FillingMethod::WordPower: {
      const Path z = path_from_json(t.chart(), ev.at("path"));
      if (!t.chart().is_cyclically_reduced(z)) {
        bad.push_back("word is not cyclically reduced");
        break;
      }
      append(bad, verify_three_subword(ev.at("filling").at("evidence"), path_to_class(z, t.chart()), t.chart().rank()));
      append(bad, verify_items(t, ev.at("items"), {{"z", z}}));
      break;
    }
    default:
      bad.push_back("not a table certificate");
  }
  return bad;
}

}  // namespace wh
