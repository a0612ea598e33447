#include "wh/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "wh/error.hpp"
#include "wh/rng.hpp"

namespace wh::bench {

using json = nlohmann::json;

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.schema = j.value("schema", kConfigSchema);
    c.experiment = j.at("experiment").get<std::string>();
    if (j.contains("sampler")) {
      const json& s = j.at("sampler");
      c.sampler.kind = s.at("kind").get<std::string>();
      c.sampler.options = s;
      c.sampler.options.erase("kind");
    }
    c.lengths = j.at("lengths").get<std::vector<std::size_t>>();
    c.trials = j.value("trials", std::size_t{1});
    c.seed = j.value("seed", std::uint64_t{1});
    c.params = j.value("params", json::object());
    c.output = j.value("output", std::string{});
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json s = sampler.options;
  s["kind"] = sampler.kind;
  return {{"schema", schema}, {"experiment", experiment}, {"sampler", s},   {"lengths", lengths},
          {"trials", trials}, {"seed", seed},             {"params", params}, {"output", output}};
}

void ExperimentConfig::validate() const {
  if (schema != kConfigSchema) throw InvalidArgument("unsupported config schema " + std::to_string(schema));
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (lengths.empty()) throw InvalidArgument("lengths must be nonempty");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] == 0) throw InvalidArgument("lengths must be positive");
    if (i && lengths[i] <= lengths[i - 1]) throw InvalidArgument("lengths must be strictly increasing");
  }
}

std::string TrialRecord::make_id(const std::string& experiment, std::size_t n, std::size_t trial) {
  return experiment + "/" + std::to_string(n) + "/" + std::to_string(trial);
}

TrialRecord TrialRecord::from_json(const json& j) {
  TrialRecord r;
  r.id = j.at("id").get<std::string>();
  r.experiment = j.at("experiment").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.trial = j.at("trial").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.status = j.at("status").get<std::string>();
  r.metrics = j.value("metrics", json::object());
  r.timing = j.value("timing", json::object());
  if (r.id != make_id(r.experiment, r.n, r.trial)) throw ParseError("record id does not match its fields");
  return r;
}

json TrialRecord::to_json() const {
  return {{"id", id},         {"experiment", experiment}, {"n", n},           {"trial", trial},
          {"seed", seed},     {"status", status},         {"metrics", metrics}, {"timing", timing}};
}

// Sampler

namespace {

ClosingMode parse_mode(const std::string& m) {
  if (m == "hat") return ClosingMode::Hat;
  if (m == "breve") return ClosingMode::Breve;
  throw InvalidArgument("closing mode must be hat or breve");
}

Path letter_path(std::span<const Letter> letters) {
  Path p;
  p.reserve(letters.size());
  for (Letter x : letters) p.push_back(x.code());
  return p;
}

}  // namespace

Sampler::Sampler(const SamplerSpec& spec) : kind_(spec.kind) {
  const json& o = spec.options;
  rank_ = o.value("rank", 2);
  if (kind_ == "uniform") {
    Preset p = make_preset("rose2", rank_);
    chart_ = p.graph;
    chain_ = std::move(p.chain);
  } else if (kind_ == "biased") {
    json letters = o.value("letters", json{{"a", 0.1}, {"b", 0.9}});
    double total = 0;
    for (auto& [k, v] : letters.items()) {
      if (k.size() != 1) throw InvalidArgument("biased sampler letters must be single characters");
      const double p = v.get<double>();
      if (p < 0) throw InvalidArgument("negative letter probability");
      letters_.emplace_back(Letter::from_char(k[0]), p);
      total += p;
    }
    if (std::abs(total - 1) > 1e-12) throw InvalidArgument("letter probabilities must sum to 1");
    int r = 2;
    for (auto& [x, p] : letters_) r = std::max(r, x.index() + 1);
    rank_ = std::max(rank_, r);
    chart_ = std::make_shared<const MarkedGraph>(MarkedGraph::rose(rank_));
  } else if (kind_ == "fsmc") {
    if (o.contains("graph")) {
      chart_ = std::make_shared<const MarkedGraph>(MarkedGraph::from_json(o.at("graph")));
      chain_ = Fsmc::from_json(o.at("chain"));
    } else {
      Preset p = make_preset(o.value("preset", std::string("rose2")), rank_);
      chart_ = p.graph;
      chain_ = std::move(p.chain);
    }
    if (auto v = validate_gamma_based(*chain_, *chart_); !v.empty())
      throw InvalidArgument("chain is not Gamma-based: " + v[0].detail);
    if (!is_irreducible(*chain_)) throw NotIrreducible();
    rank_ = chart_->rank();
    closing_.emplace(*chart_);
    mode_ = parse_mode(o.value("mode", std::string("hat")));
    const std::string init = o.value("initial", std::string("uniform"));
    if (init == "uniform")
      initial_ = uniform_initial(*chain_);
    else if (init == "stationary")
      initial_ = stationary(*chain_);
    else
      throw InvalidArgument("initial must be uniform or stationary");
  } else if (kind_ == "group_walk") {
    chart_ = std::make_shared<const MarkedGraph>(MarkedGraph::rose(rank_));
    if (o.contains("increments")) {
      Rational total = 0;
      for (const auto& inc : o.at("increments")) {
        Rational p = inc.at("p").is_string() ? parse_rational(inc.at("p").get<std::string>())
                                             : rational_from_double(inc.at("p").get<double>());
        const Word w = Word::parse(inc.at("word").get<std::string>());
        for (Letter x : w.letters())
          if (x.index() >= rank_) throw InvalidArgument("increment uses letters outside the rank");
        increments_.emplace_back(w, p);
        total += p;
      }
      if (total != 1) throw InvalidArgument("increment probabilities must sum to 1");
    } else {
      for (Letter x : Alphabet(rank_).letters())
        increments_.emplace_back(Word::parse(std::string(1, x.to_char())), Rational(1, 2 * rank_));
    }
  } else {
    throw InvalidArgument("unknown sampler kind " + kind_);
  }
}

bool Sampler::is_tight() const { return chain_ && wh::is_tight(*chain_); }

Sample Sampler::draw(std::size_t n, std::uint64_t seed) const {
  Sample s;
  if (kind_ == "uniform") {
    s.cls = sample_uniform_cyclic(rank_, n, seed);
    s.closed = letter_path(s.cls->letters());
  } else if (kind_ == "fsmc") {
    DirectedSample d = sample_fsmc_directed(*chain_, *chart_, *closing_, initial_, mode_, n, seed);
    s.raw = std::move(d.raw);
    s.closed = std::move(d.closed);
    s.cls = std::move(d.cls);
  } else {
    s.word = kind_ == "biased" ? sample_biased_letters(letters_, n, seed) : sample_group_walk(increments_, n, seed);
    CyclicReduction red = cyclic_reduce(s.word);
    if (red.cls) {
      s.closed = letter_path(red.cls->letters());
      s.cls = std::move(red.cls);
    }
  }
  return s;
}

Path Sampler::walk(std::size_t n, std::uint64_t seed) const {
  if (kind_ != "fsmc") throw InvalidArgument("raw walks need an fsmc sampler");
  return sample_edge_walk(*chain_, *chart_, initial_, n, seed);
}

// Tables and statistics

json SummaryTable::to_json() const {
  json out = json::array();
  for (const auto& row : rows) {
    json r = json::object();
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) r[columns[i]] = row[i];
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string to_csv(const SummaryTable& table) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << '\n';
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
  return out.str();
}

void write_csv(const std::filesystem::path& path, const SummaryTable& table) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << to_csv(table);
}

std::filesystem::path summary_path(const std::filesystem::path& jsonl) {
  std::filesystem::path p = jsonl;
  p.replace_extension(".summary.csv");
  return p;
}

unsigned default_threads() {
  if (const char* env = std::getenv("WH_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return static_cast<unsigned>(t);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double median(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

// Persistence

std::vector<TrialRecord> load_records(const std::filesystem::path& path, std::size_t* dropped) {
  std::vector<TrialRecord> out;
  std::size_t bad = 0;
  std::ifstream f(path);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(TrialRecord::from_json(json::parse(line)));
    } catch (const std::exception&) {
      ++bad;
    }
  }
  if (dropped) *dropped = bad;
  return out;
}

namespace {

class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path) : out_(path, std::ios::app) {
    if (!out_) throw Error("cannot append to " + path.string());
    thread_ = std::thread([this] { loop(); });
  }
  ~RecordWriter() { close(); }

  void push(const TrialRecord& r) {
    {
      std::lock_guard lock(mutex_);
      queue_.push_back(r.to_json().dump());
    }
    cv_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      if (done_) return;
      done_ = true;
    }
    cv_.notify_one();
    thread_.join();
  }

 private:
  void loop() {
    std::unique_lock lock(mutex_);
    for (;;) {
      cv_.wait(lock, [&] { return done_ || !queue_.empty(); });
      while (!queue_.empty()) {
        std::string line = std::move(queue_.front());
        queue_.pop_front();
        lock.unlock();
        out_ << line << '\n';
        out_.flush();
        lock.lock();
      }
      if (done_) return;
    }
  }

  std::ofstream out_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  bool done_ = false;
  std::thread thread_;
};

TrialRecord run_trial(const Experiment& exp, const ExperimentConfig& cfg, const Sampler& sampler, std::size_t n,
                      std::size_t trial) {
  TrialRecord r;
  r.experiment = cfg.experiment;
  r.n = n;
  r.trial = trial;
  r.id = TrialRecord::make_id(cfg.experiment, n, trial);
  r.seed = trial_seed(cfg.seed, cfg.experiment, n, trial);
  const auto start = std::chrono::steady_clock::now();
  try {
    TrialResult res = exp.run(cfg, sampler, n, trial, r.seed);
    r.status = res.status;
    r.metrics = std::move(res.metrics);
    r.timing = std::move(res.timing);
  } catch (const Degenerate& e) {
    r.status = "degenerate";
    r.metrics = {{"detail", e.what()}};
  } catch (const Error& e) {
    r.status = "error";
    r.metrics = {{"detail", e.what()}};
  }
  r.timing["wall_ns"] =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const Experiment& exp = find_experiment(cfg.experiment);
  const Sampler sampler(cfg.sampler);
  if (exp.check) exp.check(cfg, sampler);

  RunResult result;
  std::map<std::string, TrialRecord> done;
  std::set<std::string> wanted;
  for (std::size_t n : cfg.lengths)
    for (std::size_t t = 0; t < cfg.trials; ++t) wanted.insert(TrialRecord::make_id(cfg.experiment, n, t));

  if (!cfg.output.empty()) {
    result.jsonl = cfg.output;
    result.csv = summary_path(result.jsonl);
    if (result.jsonl.has_parent_path()) std::filesystem::create_directories(result.jsonl.parent_path());
    if (opt.resume && std::filesystem::exists(result.jsonl)) {
      for (auto& r : load_records(result.jsonl, &result.dropped_lines))
        if (wanted.count(r.id) && !done.count(r.id)) done.emplace(r.id, std::move(r));
      // Compact: rewrite only the valid, unique records before appending.
      const auto tmp = std::filesystem::path(result.jsonl.string() + ".tmp");
      {
        std::ofstream f(tmp, std::ios::trunc);
        for (const auto& [id, r] : done) f << r.to_json().dump() << '\n';
      }
      std::filesystem::rename(tmp, result.jsonl);
    } else {
      std::ofstream(result.jsonl, std::ios::trunc);
    }
  }
  result.resumed = done.size();

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t n : cfg.lengths)
    for (std::size_t t = 0; t < cfg.trials; ++t)
      if (!done.count(TrialRecord::make_id(cfg.experiment, n, t))) jobs.emplace_back(n, t);

  std::optional<RecordWriter> writer;
  if (!cfg.output.empty()) writer.emplace(result.jsonl);
  std::vector<TrialRecord> fresh(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      fresh[i] = run_trial(exp, cfg, sampler, jobs[i].first, jobs[i].second);
      if (writer) writer->push(fresh[i]);
      if (opt.on_record) {
        std::lock_guard lock(callback_mutex);
        opt.on_record(fresh[i]);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads.value_or(default_threads()),
                                                           static_cast<unsigned>(std::max<std::size_t>(1, jobs.size()))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (writer) writer->close();
  result.executed = jobs.size();

  for (auto& [id, r] : done) result.records.push_back(std::move(r));
  for (auto& r : fresh) result.records.push_back(std::move(r));
  std::sort(result.records.begin(), result.records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return std::tie(a.n, a.trial) < std::tie(b.n, b.trial); });
  result.summary = exp.summarize(cfg, result.records);
  if (!cfg.output.empty()) write_csv(result.csv, result.summary);
  return result;
}

}  // namespace wh::bench
