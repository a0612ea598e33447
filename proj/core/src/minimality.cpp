#include "wh/minimality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "wh/error.hpp"
#include "wh/samplers.hpp"

namespace wh {

namespace {

bool within_step(const Rational& one_plus_eps, std::size_t from, std::size_t to) {
  return Rational(static_cast<unsigned long>(to)) <= one_plus_eps * static_cast<unsigned long>(from);
}

bool below_lambda(const Rational& lambda, std::size_t from, std::size_t to) {
  return Rational(static_cast<unsigned long>(to)) < lambda * static_cast<unsigned long>(from);
}

std::optional<MleViolation> check_ratio_band(const std::vector<CyclicWord>& S, const Rational& eps) {
  if (S.empty()) return std::nullopt;
  auto [lo, hi] = std::minmax_element(S.begin(), S.end(),
                                      [](const CyclicWord& a, const CyclicWord& b) { return a.size() < b.size(); });
  const unsigned long mn = lo->size(), mx = hi->size();
  if (Rational(mx) > (1 + eps) * mn || Rational(mn) < (1 - eps) * mx)
    return MleViolation{3, "length ratio " + std::to_string(mx) + "/" + std::to_string(mn) + " outside [1-eps, 1+eps]"};
  return std::nullopt;
}

std::optional<MleViolation> check_escapes_mlew(const MoveSet& set, const std::vector<CyclicWord>& S,
                                               const Rational& lambda) {
  const std::set<CyclicWord> members(S.begin(), S.end());
  for (const auto& u : S) {
    for (const auto& e : set.entries()) {
      if (e.inner) continue;
      const std::size_t len = e.move.image_length(u);
      if (!below_lambda(lambda, u.size(), len)) continue;
      if (members.count(e.move.apply(u))) continue;
      return MleViolation{4, "move " + std::to_string(e.index) + " sends " + u.str() + " outside S with ratio " +
                                 std::to_string(len) + "/" + std::to_string(u.size())};
    }
  }
  return std::nullopt;
}

std::size_t ball_cap(const Rational& lambda, std::size_t len) {
  Rational bound = lambda * static_cast<unsigned long>(len);
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  const std::size_t below = static_cast<std::size_t>(c.get_ui()) - 1;
  return std::max(below, len);
}

}  // namespace

bool is_strictly_minimal(const MoveSet& set, const CyclicWord& c) {
  for (const auto& e : set.entries()) {
    if (e.first_kind || e.inner) continue;
    if (e.move.image_length(c) <= c.size()) return false;
  }
  return true;
}

void MleParams::validate() const {
  if (M < 1) throw InvalidArgument("M must be >= 1");
  if (lambda <= 1) throw InvalidArgument("lambda must exceed 1");
  if (epsilon < 0 || epsilon >= lambda - 1) throw InvalidArgument("need 0 <= eps < lambda - 1");
}

bool MleParams::detector_admissible() const {
  return epsilon > 0 && epsilon < 1 && lambda * (1 - epsilon) > 1 + epsilon;
}

MlewDetection detect_mlew(const MoveSet& set, const CyclicWord& c, const MleParams& p) {
  p.validate();
  if (!p.detector_admissible()) throw InvalidArgument("need 0 < eps < 1 and lambda (1-eps)/(1+eps) > 1");
  const Rational step = 1 + p.epsilon;
  MlewDetection out;
  std::vector<CyclicWord> S{c};
  std::vector<int> depth{0};
  std::unordered_set<CyclicWord> seen{c};
  for (std::size_t head = 0; head < S.size(); ++head) {
    if (depth[head] >= p.M) continue;
    const CyclicWord u = S[head];
    for (const auto& e : set.entries()) {
      if (e.inner || !within_step(step, u.size(), e.move.image_length(u))) continue;
      CyclicWord v = e.move.apply(u);
      if (!seen.insert(v).second) continue;
      S.push_back(std::move(v));
      depth.push_back(depth[head] + 1);
      if (static_cast<int>(S.size()) > p.M) {
        std::sort(S.begin(), S.end());
        out.set = std::move(S);
        out.failure = MleViolation{1, "more than M classes reachable by admissible chains"};
        return out;
      }
    }
  }
  std::sort(S.begin(), S.end());
  out.set = S;
  if (auto v = check_ratio_band(S, p.epsilon)) {
    out.failure = v;
    return out;
  }
  if (auto v = check_escapes_mlew(set, S, p.lambda)) {
    out.failure = v;
    return out;
  }
  out.minimal = true;
  return out;
}

MleVerdict verify_minimizing_set(const MoveSet& set, std::vector<CyclicWord> S, const MleParams& p,
                                 MleMode mode, std::size_t vertex_cap) {
  p.validate();
  if (S.empty()) throw InvalidArgument("empty candidate set");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  MleVerdict verdict;
  auto fail = [&verdict](MleViolation v) {
    verdict.ok = false;
    verdict.violations.push_back(std::move(v));
  };
  if (static_cast<int>(S.size()) > p.M) fail({1, "#S = " + std::to_string(S.size()) + " > M"});
  for (std::size_t i = 1; i < S.size(); ++i)
    if (!equivalent(set, S[0], S[i], vertex_cap).equivalent)
      fail({2, S[0].str() + " and " + S[i].str() + " lie in different orbits"});
  if (auto v = check_ratio_band(S, p.epsilon)) fail(*v);
  if (mode == MleMode::MLEW) {
    if (auto v = check_escapes_mlew(set, S, p.lambda)) fail(*v);
    return verdict;
  }
  const std::set<CyclicWord> members(S.begin(), S.end());
  for (const auto& u : S) {
    for (const auto& v : orbit_ball(set, u, ball_cap(p.lambda, u.size()), vertex_cap)) {
      if (members.count(v) || !below_lambda(p.lambda, u.size(), v.size())) continue;
      fail({4, v.str() + " is in the orbit of " + u.str() + " with ratio " + std::to_string(v.size()) + "/" +
                   std::to_string(u.size()) + " < lambda"});
      break;
    }
  }
  return verdict;
}

nlohmann::json DistortionEstimate::to_json(const MoveSet& set) const {
  nlohmann::json j;
  j["samples"] = samples;
  j["J"] = J;
  j["lambda"] = lambda ? nlohmann::json(*lambda) : nlohmann::json(nullptr);
  j["multiplicity"] = multiplicity;
  j["deduplicated"] = deduplicated;
  j["minimizing"] = minimizing;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : stats) {
    nlohmann::json moves = nlohmann::json::array();
    for (std::size_t m : s.moves) moves.push_back(set[m].move.to_json());
    rows.push_back({{"moves", moves},
                    {"first_kind_only", s.first_kind_only},
                    {"count", s.count},
                    {"mean", s.mean},
                    {"sd", s.sd},
                    {"radius", s.radius},
                    {"below_floor", s.below_floor}});
  }
  j["automorphisms"] = std::move(rows);
  return j;
}

DistortionEstimate estimate_distortion(const MoveSet& set, const std::function<CyclicWord(std::size_t)>& stream,
                                       const DistortionOptions& opt) {
  if (opt.samples == 0) throw InvalidArgument("empty sample stream");
  if (opt.radius < 1) throw InvalidArgument("radius must be >= 1");

  struct Product {
    std::vector<std::size_t> moves;
    std::optional<std::size_t> parent;
    std::vector<CyclicWord> probe_images;
  };
  std::vector<CyclicWord> probes;
  for (std::size_t i = 0; i < opt.probes; ++i)
    probes.push_back(sample_uniform_cyclic(set.rank(), opt.probe_length, mix_seed({opt.seed, 0x9b0be5ULL, i})));

  auto signature = [](const std::vector<CyclicWord>& images) {
    std::vector<std::uint64_t> sig;
    for (const auto& w : images) sig.push_back(w.fingerprint());
    return sig;
  };
  std::vector<Product> products{{{}, std::nullopt, probes}};
  std::map<std::vector<std::uint64_t>, std::size_t> by_action{{signature(probes), 0}};
  std::size_t deduplicated = 0;
  std::size_t layer_begin = 0;
  for (int r = 1; r <= opt.radius; ++r) {
    const std::size_t layer_end = products.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& e : set.entries()) {
        if (e.inner) continue;
        std::vector<CyclicWord> images;
        images.reserve(probes.size());
        for (const auto& w : products[i].probe_images) images.push_back(e.move.apply(w));
        if (!by_action.emplace(signature(images), products.size()).second) {
          ++deduplicated;
          continue;
        }
        auto moves = products[i].moves;
        moves.push_back(e.index);
        products.push_back({std::move(moves), i, std::move(images)});
      }
    }
    layer_begin = layer_end;
  }

  std::vector<double> sum(products.size(), 0.0), sumsq(products.size(), 0.0);
  std::vector<std::optional<CyclicWord>> image(products.size());
  for (std::size_t s = 0; s < opt.samples; ++s) {
    const CyclicWord w = stream(s);
    const double len = static_cast<double>(w.size());
    image[0] = w;
    for (std::size_t i = 0; i < products.size(); ++i) {
      if (i > 0) image[i] = set[products[i].moves.back()].move.apply(*image[*products[i].parent]);
      const double ratio = static_cast<double>(image[i]->size()) / len;
      sum[i] += ratio;
      sumsq[i] += ratio * ratio;
    }
  }

  DistortionEstimate est;
  est.samples = opt.samples;
  est.deduplicated = deduplicated;
  const double k = static_cast<double>(opt.samples);
  for (std::size_t i = 0; i < products.size(); ++i) {
    AutomorphismStat st;
    st.moves = products[i].moves;
    st.first_kind_only = std::all_of(st.moves.begin(), st.moves.end(), [&](std::size_t m) { return set[m].first_kind; });
    st.count = opt.samples;
    st.mean = sum[i] / k;
    const double var = opt.samples > 1 ? std::max(0.0, (sumsq[i] - k * st.mean * st.mean) / (k - 1)) : 0.0;
    st.sd = std::sqrt(var);
    st.radius = 1.96 * st.sd / std::sqrt(k);
    st.below_floor = opt.samples < kConfidenceSampleFloor;
    est.stats.push_back(std::move(st));
  }
  std::stable_sort(est.stats.begin(), est.stats.end(), [](const AutomorphismStat& a, const AutomorphismStat& b) {
    return a.mean < b.mean || (a.mean == b.mean && a.moves < b.moves);
  });
  est.J = est.stats.front().mean;
  for (std::size_t i = 0; i < est.stats.size(); ++i) {
    if (est.stats[i].mean <= est.J + opt.tie_tolerance) {
      est.minimizing.push_back(i);
    } else if (!est.lambda) {
      est.lambda = est.stats[i].mean / est.J;
    }
  }
  est.multiplicity = est.minimizing.size();
  return est;
}

}  // namespace wh
