#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "wh/bench.hpp"
#include "wh/error.hpp"
#include "wh/minimality.hpp"
#include "wh/moves.hpp"
#include "wh/rng.hpp"
#include "wh/whitehead.hpp"

namespace wh::bench {

namespace {

using json = nlohmann::json;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

struct Group {
  std::size_t n;
  std::vector<const TrialRecord*> all;
  std::vector<const TrialRecord*> ok;
  std::string ids;
};

std::vector<Group> by_length(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  std::vector<Group> out;
  for (std::size_t n : cfg.lengths) {
    Group g{n, {}, {}, {}};
    for (const auto& r : records) {
      if (r.n != n) continue;
      g.all.push_back(&r);
      if (r.status == "ok") g.ok.push_back(&r);
      g.ids += (g.ids.empty() ? "" : ";") + r.id;
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<double> metric(const Group& g, const char* key) {
  std::vector<double> v;
  for (const auto* r : g.ok) v.push_back(r->metrics.at(key).get<double>());
  return v;
}

std::size_t count_true(const Group& g, const char* key) {
  std::size_t c = 0;
  for (const auto* r : g.ok) c += r->metrics.at(key).get<bool>() ? 1 : 0;
  return c;
}

const CyclicWord& need_class(const Sample& s) {
  if (!s.cls) throw Degenerate("sample reduces to the identity");
  return *s.cls;
}

void need_word_sampler(const ExperimentConfig& cfg, const Sampler&) {
  if (cfg.sampler.kind == "group_walk" && cfg.experiment != "adaptedness" && cfg.experiment != "strict_minimality")
    throw InvalidArgument(cfg.experiment + " does not take group walks");
}

std::string frac(std::size_t k, std::size_t n) { return n ? fmt(static_cast<double>(k) / static_cast<double>(n)) : ""; }

// strict_minimality

Experiment strict_minimality() {
  Experiment e;
  e.name = "strict_minimality";
  e.run = [](const ExperimentConfig&, const Sampler& s, std::size_t n, std::size_t, std::uint64_t seed) {
    const CyclicWord c = need_class(s.draw(n, seed));
    TrialResult r;
    r.metrics = {{"length", c.size()}, {"strictly_minimal", is_strictly_minimal(MoveSet::for_rank(s.rank()), c)}};
    return r;
  };
  e.summarize = [](const ExperimentConfig& cfg, const std::vector<TrialRecord>& recs) {
    SummaryTable t{{"n", "trials", "ok", "strictly_minimal", "fraction", "stderr", "records"}, {}};
    for (const auto& g : by_length(cfg, recs)) {
      const std::size_t k = count_true(g, "strictly_minimal");
      const double p = g.ok.empty() ? 0 : static_cast<double>(k) / static_cast<double>(g.ok.size());
      const double se = g.ok.empty() ? 0 : std::sqrt(p * (1 - p) / static_cast<double>(g.ok.size()));
      t.rows.push_back({std::to_string(g.n), std::to_string(g.all.size()), std::to_string(g.ok.size()),
                        std::to_string(k), frac(k, g.ok.size()), fmt(se), g.ids});
    }
    return t;
  };
  return e;
}

// ex1_ratio

Move param_move(const ExperimentConfig& cfg, int rank, const json& fallback) {
  const json images = cfg.params.value("move", fallback);
  std::vector<Word> words;
  for (const auto& w : images) words.push_back(Word::parse(w.get<std::string>()));
  for (int i = static_cast<int>(words.size()); i < rank; ++i)
    words.push_back(Word::parse(std::string(1, Letter::generator(i).to_char())));
  return Move::from_images(rank, words);
}

Experiment ex1_ratio() {
  Experiment e;
  e.name = "ex1_ratio";
  e.check = [](const ExperimentConfig& cfg, const Sampler& s) {
    need_word_sampler(cfg, s);
    param_move(cfg, s.rank(), json{"aB", "b"});
  };
  e.run = [](const ExperimentConfig& cfg, const Sampler& s, std::size_t n, std::size_t, std::uint64_t seed) {
    const CyclicWord c = need_class(s.draw(n, seed));
    const Move tau = param_move(cfg, s.rank(), json{"aB", "b"});
    const std::size_t image = tau.image_length(c);
    TrialResult r;
    r.metrics = {{"length", c.size()},
                 {"image_length", image},
                 {"ratio", static_cast<double>(image) / static_cast<double>(c.size())},
                 {"drop", static_cast<long long>(c.size()) - static_cast<long long>(image)}};
    return r;
  };
  e.summarize = [](const ExperimentConfig& cfg, const std::vector<TrialRecord>& recs) {
    SummaryTable t{{"n", "trials", "ok", "mean_ratio", "sd_ratio", "mean_drop", "mean_drop_per_n", "records"}, {}};
    for (const auto& g : by_length(cfg, recs)) {
      const auto ratio = metric(g, "ratio");
      const auto drop = metric(g, "drop");
      t.rows.push_back({std::to_string(g.n), std::to_string(g.all.size()), std::to_string(g.ok.size()),
                        fmt(mean(ratio)), fmt(stddev(ratio)), fmt(mean(drop)),
                        fmt(mean(drop) / static_cast<double>(g.n)), g.ids});
    }
    return t;
  };
  return e;
}

// lambda0

double lambda0_bound(int rank) {
  const double n = rank;
  return 1 + (2 * n - 3) / (2 * n * n - n);
}

Experiment lambda0() {
  Experiment e;
  e.name = "lambda0";
  e.check = need_word_sampler;
  e.run = [](const ExperimentConfig&, const Sampler& s, std::size_t n, std::size_t, std::uint64_t seed) {
    const CyclicWord c = need_class(s.draw(n, seed));
    const MoveSet& set = MoveSet::for_rank(s.rank());
    json ratios = json::array();
    bool first_exact = true;
    double least = 0;
    bool have = false;
    for (const auto& m : set.entries()) {
      const std::size_t image = m.move.image_length(c);
      if (m.first_kind) {
        first_exact = first_exact && image == c.size();
        ratios.push_back(nullptr);
        continue;
      }
      if (m.inner) {
        ratios.push_back(nullptr);
        continue;
      }
      const double q = static_cast<double>(image) / static_cast<double>(c.size());
      ratios.push_back(q);
      if (!have || q < least) least = q;
      have = true;
    }
    TrialResult r;
    r.metrics = {{"length", c.size()}, {"first_kind_exact", first_exact}, {"min_ratio", least}, {"ratios", ratios}};
    return r;
  };
  e.summarize = [](const ExperimentConfig& cfg, const std::vector<TrialRecord>& recs) {
    SummaryTable t{{"n", "trials", "ok", "min_mean_ratio", "argmin_move", "mean_trial_min", "lambda0",
                    "first_kind_exact", "records"},
                   {}};
    for (const auto& g : by_length(cfg, recs)) {
      std::map<std::size_t, std::vector<double>> per_move;
      for (const auto* r : g.ok) {
        const auto& ratios = r->metrics.at("ratios");
        for (std::size_t i = 0; i < ratios.size(); ++i)
          if (!ratios[i].is_null()) per_move[i].push_back(ratios[i].get<double>());
      }
      double best = 0;
      std::size_t arg = 0;
      bool have = false;
      for (auto& [i, v] : per_move)
        if (!have || mean(v) < best) {
          best = mean(v);
          arg = i;
          have = true;
        }
      const int rank = cfg.sampler.options.value("rank", 2);
      t.rows.push_back({std::to_string(g.n), std::to_string(g.all.size()), std::to_string(g.ok.size()),
                        have ? fmt(best) : "", have ? std::to_string(arg) : "", fmt(mean(metric(g, "min_ratio"))),
                        fmt(lambda0_bound(rank)), count_true(g, "first_kind_exact") == g.ok.size() ? "true" : "false",
                        g.ids});
    }
    return t;
  };
  return e;
}

// adaptedness

Experiment adaptedness() {
  Experiment e;
  e.name = "adaptedness";
  e.check = [](const ExperimentConfig&, const Sampler& s) {
    if (s.kind() == "biased") throw InvalidArgument("adaptedness needs a uniform, fsmc or group_walk sampler");
  };
  e.run = [](const ExperimentConfig& cfg, const Sampler& s, std::size_t n, std::size_t, std::uint64_t seed) {
    const int depth = cfg.params.value("depth", 3);
    TrialResult r;
    if (s.kind() == "group_walk") {
      // Cauchy diagnostic: the same trajectory at n and 2n.
      const Sample a = s.draw(n, seed), b = s.draw(2 * n, seed);
      const WeightTable ta = counting_current(need_class(a), depth, s.rank());
      const WeightTable tb = counting_current(need_class(b), depth, s.rank());
      r.metrics = {{"closed_length", a.cls->size()},
                   {"closed_length_2n", b.cls->size()},
                   {"distance", to_double(projective_distance(ta, tb))}};
      return r;
    }
    const Sample smp = s.draw(n, seed);
    need_class(smp);
    auto trie = make_trie(s.chart(), depth);
    const WeightTable counted = counting_current(trie, smp.closed);
    const WeightTable target = characteristic_current(*s.chain(), s.chart(), depth);
    r.metrics = {{"closed_length", smp.closed.size()}, {"distance", to_double(projective_distance(counted, target))}};
    return r;
  };
  e.summarize = [](const ExperimentConfig& cfg, const std::vector<TrialRecord>& recs) {
    SummaryTable t{{"n", "trials", "ok", "mean_distance", "median_distance", "max_distance", "records"}, {}};
    for (const auto& g : by_length(cfg, recs)) {
      const auto d = metric(g, "distance");
      t.rows.push_back({std::to_string(g.n), std::to_string(g.all.size()), std::to_string(g.ok.size()), fmt(mean(d)),
                        d.empty() ? "" : fmt(median(d)), d.empty() ? "" : fmt(*std::max_element(d.begin(), d.end())),
                        g.ids});
    }
    return t;
  };
  return e;
}

// minset_stability

Experiment minset_stability() {
  Experiment e;
  e.name = "minset_stability";
  e.check = need_word_sampler;
  e.run = [](const ExperimentConfig& cfg, const Sampler& s, std::size_t n, std::size_t, std::uint64_t seed) {
    const CyclicWord c = need_class(s.draw(n, seed));
    const MoveSet& set = MoveSet::for_rank(s.rank());
    const auto cap = cfg.params.value("vertex_cap", std::size_t{100000});
    const Minimization m = minimize(set, c);
    TrialResult r;
    r.metrics = {{"length", c.size()}, {"min_length", m.result.size()}, {"steps", m.steps}};
    try {
      const LevelComponent lc = level_component(set, m.result, cap);
      const std::size_t edges = lc.topological_edge_count(set);
      r.metrics["minset"] = lc.vertices.size();
      r.metrics["stabilizer_generators"] = edges + 1 - lc.vertices.size();
    } catch (const CapExceeded&) {
      r.status = "capped";
    }
    return r;
  };
  e.summarize = [](const ExperimentConfig& cfg, const std::vector<TrialRecord>& recs) {
    const int rank = cfg.sampler.options.value("rank", 2);
    std::size_t signed_perms = 1;
    for (int i = 1; i <= rank; ++i) signed_perms *= 2 * static_cast<std::size_t>(i);
    const auto bound = cfg.params.value("minset_bound", signed_perms);
    const auto max_steps = cfg.params.value("max_steps", std::size_t{3});
    SummaryTable t{{"n", "trials", "ok", "max_minset", "minset_within_bound", "steps_within_bound", "mean_steps",
                    "max_stabilizer_generators", "records"},
                   {}};
    for (const auto& g : by_length(cfg, recs)) {
      std::size_t within = 0, steps_ok = 0, top = 0, gens = 0;
      for (const auto* r : g.ok) {
        const auto k = r->metrics.at("minset").get<std::size_t>();
        top = std::max(top, k);
        within += k <= bound;
        steps_ok += r->metrics.at("steps").get<std::size_t>() <= max_steps;
        gens = std::max(gens, r->metrics.at("stabilizer_generators").get<std::size_t>());
      }
      t.rows.push_back({std::to_string(g.n), std::to_string(g.all.size()), std::to_string(g.ok.size()),
                        std::to_string(top), frac(within, g.all.size()), frac(steps_ok, g.all.size()),
                        fmt(mean(metric(g, "steps"))), std::to_string(gens), g.ids});
    }
    return t;
  };
  return e;
}

// equiv_fuzz

Experiment equiv_fuzz() {
  Experiment e;
  e.name = "equiv_fuzz";
  e.check = need_word_sampler;
  e.run = [](const ExperimentConfig& cfg, const Sampler& s, std::size_t n, std::size_t, std::uint64_t seed) {
    const auto max_moves = cfg.params.value("max_moves", 3);
    const auto reps = std::max(1, cfg.params.value("repetitions", 5));
    const MoveSet& set = MoveSet::for_rank(s.rank());
    std::vector<std::size_t> usable;
    for (const auto& m : set.entries())
      if (!m.inner) usable.push_back(m.index);

    const CyclicWord c = need_class(s.draw(n, seed));
    CounterRng rng(seed, 1);
    const auto k = 1 + rng.below(static_cast<std::uint64_t>(max_moves));
    std::vector<std::size_t> product;
    CyclicWord c2 = c;
    for (std::uint64_t i = 0; i < k; ++i) {
      product.push_back(usable[rng.below(usable.size())]);
      c2 = set[product.back()].move.apply(c2);
    }

    std::vector<double> ns;
    Equivalence eq{false, std::nullopt};
    for (int i = 0; i < reps; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      eq = equivalent(set, c, c2);
      ns.push_back(static_cast<double>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count()));
    }
    const bool verified = eq.witness && witness_replays(set, *eq.witness) && eq.witness->source == c &&
                          eq.witness->target == c2;

    const CyclicWord c3 = need_class(s.draw(n, mix_seed({seed, 2})));
    const Equivalence other = equivalent(set, c, c3);
    const bool other_verified = !other.equivalent || (other.witness && witness_replays(set, *other.witness));

    TrialResult r;
    r.metrics = {{"length", c.size()},
                 {"image_length", c2.size()},
                 {"moves", product},
                 {"detected", eq.equivalent},
                 {"witness_verified", verified},
                 {"independent_equivalent", other.equivalent},
                 {"independent_witness_verified", other_verified}};
    r.timing = {{"equivalent_ns_median", median(ns)}, {"repetitions", reps}};
    return r;
  };
  e.summarize = [](const ExperimentConfig& cfg, const std::vector<TrialRecord>& recs) {
    SummaryTable t{{"n", "trials", "ok", "detected", "witness_verified", "independent_equivalent", "median_ns",
                    "slope_from_previous", "records"},
                   {}};
    double prev_n = 0, prev_t = 0;
    for (const auto& g : by_length(cfg, recs)) {
      std::vector<double> times;
      for (const auto* r : g.ok) times.push_back(r->timing.at("equivalent_ns_median").get<double>());
      const double med = times.empty() ? 0 : median(times);
      std::string slope;
      if (prev_t > 0 && med > 0)
        slope = fmt(loglog_slope({prev_n, static_cast<double>(g.n)}, {prev_t, med}));
      t.rows.push_back({std::to_string(g.n), std::to_string(g.all.size()), std::to_string(g.ok.size()),
                        std::to_string(count_true(g, "detected")), std::to_string(count_true(g, "witness_verified")),
                        std::to_string(count_true(g, "independent_equivalent")), fmt(med), slope, g.ids});
      prev_n = static_cast<double>(g.n);
      prev_t = med;
    }
    return t;
  };
  return e;
}

// quasi_inversion

double quasi_bound(const Sampler& s, std::size_t n) {
  const double sigma = to_double(s.chain()->max_entry());
  return std::pow(sigma, std::floor(std::sqrt(static_cast<double>(n))));
}

Experiment quasi_inversion() {
  Experiment e;
  e.name = "quasi_inversion";
  e.check = [](const ExperimentConfig& cfg, const Sampler& s) {
    if (s.kind() != "fsmc") throw InvalidArgument("quasi_inversion needs an fsmc sampler");
    if (!s.is_tight()) throw InvalidArgument("quasi_inversion refuses a chain that is not tight");
    if (cfg.params.value("batch", 1000) < 1) throw InvalidArgument("batch must be >= 1");
  };
  e.run = [](const ExperimentConfig& cfg, const Sampler& s, std::size_t n, std::size_t, std::uint64_t seed) {
    const auto batch = static_cast<std::uint64_t>(cfg.params.value("batch", 1000));
    std::uint64_t events = 0;
    for (std::uint64_t i = 0; i < batch; ++i) events += quasi_inverted(s.walk(n, mix_seed({seed, i}))) ? 1 : 0;
    TrialResult r;
    r.metrics = {{"walks", batch}, {"events", events}};
    return r;
  };
  e.summarize = [](const ExperimentConfig& cfg, const std::vector<TrialRecord>& recs) {
    const Sampler s(cfg.sampler);
    SummaryTable t{{"n", "batches", "walks", "events", "frequency", "bound", "stderr", "threshold", "within_bound",
                    "records"},
                   {}};
    for (const auto& g : by_length(cfg, recs)) {
      double walks = 0, events = 0;
      for (const auto* r : g.ok) {
        walks += r->metrics.at("walks").get<double>();
        events += r->metrics.at("events").get<double>();
      }
      const double b = quasi_bound(s, g.n);
      const double freq = walks > 0 ? events / walks : 0;
      const double se = walks > 0 ? std::sqrt(b * (1 - b) / walks) : 0;
      t.rows.push_back({std::to_string(g.n), std::to_string(g.ok.size()), fmt(walks), fmt(events), fmt(freq), fmt(b),
                        fmt(se), fmt(b + 3 * se), freq <= b + 3 * se ? "true" : "false", g.ids});
    }
    return t;
  };
  return e;
}

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> all = {strict_minimality(), ex1_ratio(),       lambda0(),     adaptedness(),
                                              minset_stability(),  equiv_fuzz(), quasi_inversion()};
  return all;
}

}  // namespace

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw InvalidArgument("unknown experiment " + name);
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.name);
  return out;
}

}  // namespace wh::bench
