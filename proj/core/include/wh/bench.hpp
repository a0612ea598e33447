#pragma once

// Seeded, resumable experiment runner with JSON-lines trial records and CSV
// summaries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wh/currents.hpp"
#include "wh/fsmc.hpp"
#include "wh/graph.hpp"
#include "wh/samplers.hpp"
#include "wh/word.hpp"

namespace wh::bench {

inline constexpr int kConfigSchema = 1;

/// kind: uniform | biased | fsmc | group_walk.
///   uniform     {rank}
///   biased      {letters: {"a": 0.1, "b": 0.9}}
///   fsmc        {preset, rank, mode: hat|breve, initial: uniform|stationary}
///               or {graph, chain, mode, initial}
///   group_walk  {rank, increments: [{"word": "a", "p": "1/4"}, ...]}
struct SamplerSpec {
  std::string kind = "uniform";
  nlohmann::json options = nlohmann::json::object();
};

struct ExperimentConfig {
  int schema = kConfigSchema;
  std::string experiment;
  SamplerSpec sampler;
  std::vector<std::size_t> lengths;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  nlohmann::json params = nlohmann::json::object();
  /// JSON-lines path; the CSV summary goes next to it. Empty keeps results in memory.
  std::string output;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// trials >= 1, lengths nonempty and strictly increasing, known schema.
  void validate() const;
};

struct TrialRecord {
  std::string id;  // "<experiment>/<n>/<trial>"
  std::string experiment;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // ok | degenerate | error
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json timing = nlohmann::json::object();

  static std::string make_id(const std::string& experiment, std::size_t n, std::size_t trial);
  static TrialRecord from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Sample {
  Path raw;                   // chart path before closing (fsmc only)
  Path closed;                // closed path in the sampler's chart
  Word word;                  // group element before cyclic reduction (biased, group_walk)
  std::optional<CyclicWord> cls;  // empty when the sample is trivial
};

class Sampler {
 public:
  explicit Sampler(const SamplerSpec& spec);

  const std::string& kind() const { return kind_; }
  int rank() const { return rank_; }
  const std::shared_ptr<const MarkedGraph>& chart() const { return chart_; }
  /// Defining chain for fsmc samplers; the uniform sampler reports the rose uniform chain.
  const std::optional<Fsmc>& chain() const { return chain_; }
  bool is_tight() const;

  Sample draw(std::size_t n, std::uint64_t seed) const;
  /// Raw edge walk of n steps (fsmc only).
  Path walk(std::size_t n, std::uint64_t seed) const;

 private:
  std::string kind_;
  int rank_ = 2;
  std::shared_ptr<const MarkedGraph> chart_;
  std::optional<Fsmc> chain_;
  std::optional<ClosingSystem> closing_;
  std::vector<Rational> initial_;
  ClosingMode mode_ = ClosingMode::Hat;
  std::vector<std::pair<Letter, double>> letters_;
  std::vector<std::pair<Word, Rational>> increments_;
};

struct TrialResult {
  std::string status = "ok";
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json timing = nlohmann::json::object();
};

struct SummaryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  nlohmann::json to_json() const;
};

struct Experiment {
  std::string name;
  /// Throws InvalidArgument when the config cannot run (e.g. a non-tight chain).
  std::function<void(const ExperimentConfig&, const Sampler&)> check;
  std::function<TrialResult(const ExperimentConfig&, const Sampler&, std::size_t n, std::size_t trial,
                            std::uint64_t seed)>
      run;
  /// Pure fold over the records of one run, one row per length. The last
  /// column lists the aggregated record ids.
  std::function<SummaryTable(const ExperimentConfig&, const std::vector<TrialRecord>&)> summarize;
};

const Experiment& find_experiment(const std::string& name);
std::vector<std::string> experiment_names();

struct RunOptions {
  bool resume = false;
  /// Worker count; defaults to WH_THREADS, then the hardware concurrency.
  std::optional<unsigned> threads;
  std::function<void(const TrialRecord&)> on_record;
};

struct RunResult {
  std::vector<TrialRecord> records;  // sorted by (n, trial)
  SummaryTable summary;
  std::size_t resumed = 0;
  std::size_t executed = 0;
  std::size_t dropped_lines = 0;
  std::filesystem::path jsonl;
  std::filesystem::path csv;
};

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

/// Parses a JSON-lines file, skipping malformed lines (counted in `dropped`).
std::vector<TrialRecord> load_records(const std::filesystem::path& path, std::size_t* dropped = nullptr);
std::filesystem::path summary_path(const std::filesystem::path& jsonl);
void write_csv(const std::filesystem::path& path, const SummaryTable& table);
std::string to_csv(const SummaryTable& table);

unsigned default_threads();
/// Median of at least one value.
double median(std::vector<double> v);
/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wh::bench
