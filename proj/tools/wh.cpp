// wh: command line front end for the Whitehead toolkit.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wh/bench.hpp"
#include "wh/currents.hpp"
#include "wh/error.hpp"
#include "wh/filling.hpp"
#include "wh/minimality.hpp"
#include "wh/rng.hpp"
#include "wh/samplers.hpp"
#include "wh/whitehead.hpp"

using json = nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw wh::Error("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw wh::ParseError(path + ": " + e.what());
  }
}

int rank_for(const wh::CyclicWord& c, int rank) { return std::max(rank, wh::rank_of(c.letters())); }

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

struct GraphSource {
  std::string preset;
  std::string graph;
  std::string chain;
  int rank = 2;

  void add(CLI::App* app) {
    app->add_option("--preset", preset, "rose2 | rose-positive | lollipop | chart-example2");
    app->add_option("--graph", graph, "graph JSON file");
    app->add_option("--chain", chain, "chain JSON file");
    app->add_option("--rank", rank, "rank for rose and lollipop presets");
  }

  wh::Preset load() const {
    if (!graph.empty() || !chain.empty()) {
      if (graph.empty() || chain.empty()) throw wh::InvalidArgument("--graph and --chain go together");
      return {"custom", std::make_shared<const wh::MarkedGraph>(wh::MarkedGraph::from_json(read_json(graph))),
              wh::Fsmc::from_json(read_json(chain))};
    }
    return wh::make_preset(preset.empty() ? "rose2" : preset, rank);
  }
};

wh::MleParams mle_params(int m, const std::string& lambda, const std::string& eps) {
  wh::MleParams p{m, wh::parse_rational(lambda), wh::parse_rational(eps)};
  p.validate();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whitehead algorithm, minimizing sets, Markov chains and currents on free groups"};
  app.require_subcommand(1);
  int rank = 0;
  app.add_option("--rank-floor", rank, "smallest rank to assume for word inputs");

  std::string w1, w2;
  std::size_t cap = 0;
  std::size_t vertex_cap = wh::kDefaultVertexCap;

  auto* min = app.add_subcommand("min", "Whitehead-minimize a cyclic word");
  min->add_option("word", w1)->required();

  auto* equiv = app.add_subcommand("equiv", "decide Aut(F_N)-equivalence of two cyclic words");
  equiv->add_option("w1", w1)->required();
  equiv->add_option("w2", w2)->required();
  equiv->add_option("--cap", vertex_cap, "level-component vertex cap");

  auto* orbit = app.add_subcommand("orbit", "orbit classes reachable through lengths <= cap");
  orbit->add_option("word", w1)->required();
  orbit->add_option("--cap", cap, "length cap (default: ||word||)");

  auto* stab = app.add_subcommand("stab", "stabilizer loops at the minimized word");
  stab->add_option("word", w1)->required();
  stab->add_option("--vertex-cap", vertex_cap);

  int m = 1;
  std::string lambda = "3/2", eps = "1/10";
  bool verify = false;
  auto* mle = app.add_subcommand("mle-detect", "(M, lambda, eps, W_N)-minimality detector");
  mle->add_option("word", w1)->required();
  mle->add_option("--m", m)->required();
  mle->add_option("--lambda", lambda, "rational, e.g. 3/2");
  mle->add_option("--eps", eps, "rational, e.g. 1/10");
  mle->add_flag("--verify", verify, "also verify the detected set in exact MLE mode");

  std::string sampler = "uniform";
  int radius = 1;
  std::size_t samples = 200, length = 1000;
  std::uint64_t seed = 1;
  int spectrum_rank = 2;
  auto* spectrum = app.add_subcommand("spectrum", "distortion spectrum of short automorphism products");
  spectrum->add_option("--preset", sampler, "uniform | ex1 | rose2 | rose-positive | lollipop | chart-example2");
  spectrum->add_option("--radius", radius);
  spectrum->add_option("--samples", samples);
  spectrum->add_option("--length", length, "sample word length");
  spectrum->add_option("--seed", seed);
  spectrum->add_option("--rank", spectrum_rank);

  std::string kind;
  int depth = 3;
  std::string word;
  GraphSource source;
  auto* current = app.add_subcommand("current", "dump a weight table as JSON lines");
  current->add_option("kind", kind, "uniform | counting | characteristic")->required();
  current->add_option("--depth", depth);
  current->add_option("--word", word, "cyclic word for counting tables");
  source.add(current);

  std::string method = "fsmc-xf";
  std::optional<int> xf_case;
  std::string path;
  auto* fill = app.add_subcommand("filling", "filling certificate for a word or chain");
  fill->add_option("--method", method, "three-subword | full-support-depth | basis-pairs | word-power | fsmc-xf");
  fill->add_option("--word", word, "cyclic word (three-subword)");
  fill->add_option("--depth", depth, "table depth for table methods");
  fill->add_option("--case", xf_case, "force an FsmcXF case");
  fill->add_option("--path", path, "closed path as space-separated edge ids (case 3, word-power)");
  source.add(fill);

  auto* preset = app.add_subcommand("preset", "print a preset's graph and chain");
  preset->add_option("name", source.preset)->required();
  preset->add_option("--rank", source.rank);

  std::string experiment, config;
  bool resume = false;
  std::optional<unsigned> threads;
  auto* bench = app.add_subcommand("bench", "run an experiment from a config file");
  bench->add_option("experiment", experiment)->required();
  bench->add_option("--config", config)->required();
  bench->add_flag("--resume", resume, "keep valid records and run only the missing trials");
  bench->add_option("--threads", threads, "worker count (default WH_THREADS)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (min->parsed()) {
      const auto c = wh::CyclicWord::parse(w1);
      const auto& set = wh::MoveSet::for_rank(rank_for(c, rank));
      const auto r = wh::minimize(set, c);
      print({{"input", c.str()},
             {"result", r.result.str()},
             {"length", c.size()},
             {"min_length", r.result.size()},
             {"steps", r.steps},
             {"strictly_minimal", wh::is_strictly_minimal(set, r.result)},
             {"witness", r.witness.to_json(set)}});
    } else if (equiv->parsed()) {
      const auto a = wh::CyclicWord::parse(w1), b = wh::CyclicWord::parse(w2);
      const auto& set = wh::MoveSet::for_rank(std::max(rank_for(a, rank), rank_for(b, rank)));
      const auto e = wh::equivalent(set, a, b, vertex_cap);
      json out = {{"w1", a.str()}, {"w2", b.str()}, {"equivalent", e.equivalent}};
      if (e.witness) out["witness"] = e.witness->to_json(set);
      print(out);
    } else if (orbit->parsed()) {
      const auto c = wh::CyclicWord::parse(w1);
      const auto& set = wh::MoveSet::for_rank(rank_for(c, rank));
      const std::size_t k = cap ? cap : c.size();
      json classes = json::array();
      for (const auto& x : wh::orbit_ball(set, c, k)) classes.push_back(x.str());
      print({{"word", c.str()}, {"cap", k}, {"count", classes.size()}, {"classes", classes}});
    } else if (stab->parsed()) {
      const auto c = wh::CyclicWord::parse(w1);
      const auto& set = wh::MoveSet::for_rank(rank_for(c, rank));
      const auto r = wh::minimize(set, c);
      const auto lc = wh::level_component(set, r.result, vertex_cap);
      json gens = json::array();
      for (const auto& g : wh::stabilizer_generators(set, r.result, vertex_cap)) gens.push_back(g.to_json(set));
      print({{"word", c.str()},
             {"minimal", r.result.str()},
             {"minimizer", r.witness.to_json(set)},
             {"component_vertices", lc.vertices.size()},
             {"component_edges", lc.topological_edge_count(set)},
             {"generator_count", gens.size()},
             {"generators", gens}});
    } else if (mle->parsed()) {
      const auto c = wh::CyclicWord::parse(w1);
      const auto& set = wh::MoveSet::for_rank(rank_for(c, rank));
      const auto p = mle_params(m, lambda, eps);
      const auto d = wh::detect_mlew(set, c, p);
      json s = json::array();
      for (const auto& x : d.set) s.push_back(x.str());
      json out = {{"word", c.str()}, {"M", m}, {"lambda", lambda}, {"epsilon", eps}, {"minimal", d.minimal}, {"set", s}};
      if (d.failure) out["failure"] = {{"condition", d.failure->condition}, {"detail", d.failure->detail}};
      if (verify && d.minimal) {
        const auto v = wh::verify_minimizing_set(set, d.set, p, wh::MleMode::MLE);
        json viol = json::array();
        for (const auto& x : v.violations) viol.push_back({{"condition", x.condition}, {"detail", x.detail}});
        out["mle_verified"] = v.ok;
        out["mle_violations"] = viol;
      }
      print(out);
    } else if (spectrum->parsed()) {
      std::function<wh::CyclicWord(std::size_t)> stream;
      int r = spectrum_rank;
      std::optional<wh::bench::Sampler> smp;
      if (sampler == "uniform") {
        smp.emplace(wh::bench::SamplerSpec{"uniform", {{"rank", r}}});
      } else if (sampler == "ex1") {
        smp.emplace(wh::bench::SamplerSpec{"biased", json::object()});
      } else {
        smp.emplace(wh::bench::SamplerSpec{"fsmc", {{"preset", sampler}, {"rank", r}}});
      }
      r = smp->rank();
      stream = [&](std::size_t i) {
        auto s = smp->draw(length, wh::mix_seed({seed, i}));
        if (!s.cls) throw wh::Degenerate("sample reduced to the identity");
        return *s.cls;
      };
      wh::DistortionOptions opt;
      opt.radius = radius;
      opt.samples = samples;
      opt.seed = seed;
      const auto& set = wh::MoveSet::for_rank(r);
      json out = wh::estimate_distortion(set, stream, opt).to_json(set);
      out["sampler"] = sampler;
      out["length"] = length;
      print(out);
    } else if (current->parsed()) {
      std::optional<wh::WeightTable> t;
      if (kind == "uniform") {
        t = wh::uniform_current(source.rank, depth);
      } else if (kind == "counting") {
        if (word.empty()) throw wh::InvalidArgument("counting needs --word");
        t = wh::counting_current(wh::CyclicWord::parse(word), depth, source.rank);
      } else if (kind == "characteristic") {
        const auto p = source.load();
        t = wh::characteristic_current(p.chain, p.graph, depth);
      } else {
        throw wh::InvalidArgument("unknown current kind " + kind);
      }
      for (const auto& line : t->dump()) std::cout << line.dump() << '\n';
    } else if (fill->parsed()) {
      const auto m_ = wh::parse_filling_method(method);
      wh::FillingVerdict v;
      std::optional<wh::Preset> p;
      auto parse_path = [&](const wh::MarkedGraph& g) {
        wh::Path out;
        std::istringstream in(path);
        std::string id;
        while (in >> id) {
          if (auto e = g.find_edge(id)) {
            out.push_back(*e);
          } else if (g.is_rose()) {
            for (char ch : id) out.push_back(wh::Letter::from_char(ch).code());
          } else {
            throw wh::InvalidArgument("unknown edge " + id);
          }
        }
        return out;
      };
      if (m_ == wh::FillingMethod::ThreeSubword) {
        v = wh::certify_filling(wh::CyclicWord::parse(word), m_, source.rank);
      } else {
        p = source.load();
        wh::FillingOptions opt;
        opt.xf_case = xf_case;
        if (!path.empty()) {
          opt.word = parse_path(*p->graph);
          opt.xf_path = opt.word;
        }
        v = wh::certify_filling(p->chain, p->graph, m_, opt, depth);
      }
      if (auto* cert = std::get_if<wh::FillingCertificate>(&v))
        print({{"verdict", "certified"}, {"certificate", cert->to_json()}});
      else
        print({{"verdict", "inconclusive"}, {"reason", std::get<wh::Inconclusive>(v).reason}});
    } else if (preset->parsed()) {
      const auto p = wh::make_preset(source.preset, source.rank);
      json warnings = p.graph->warnings();
      print({{"name", p.name}, {"graph", p.graph->to_json()}, {"chain", p.chain.to_json()}, {"warnings", warnings}});
    } else if (bench->parsed()) {
      auto cfg = wh::bench::ExperimentConfig::from_json(read_json(config));
      if (cfg.experiment != experiment)
        throw wh::InvalidArgument("config is for experiment " + cfg.experiment + ", not " + experiment);
      wh::bench::RunOptions opt;
      opt.resume = resume;
      opt.threads = threads;
      const auto r = wh::bench::run_experiment(cfg, opt);
      std::cerr << "resumed " << r.resumed << ", executed " << r.executed;
      if (r.dropped_lines) std::cerr << ", dropped " << r.dropped_lines << " malformed lines";
      if (!r.jsonl.empty()) std::cerr << ", records " << r.jsonl.string() << ", summary " << r.csv.string();
      std::cerr << '\n';
      std::cout << wh::bench::to_csv(r.summary);
    }
  } catch (const wh::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const wh::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const wh::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
