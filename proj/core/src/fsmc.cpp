#include "wh/fsmc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "wh/error.hpp"
#include "wh/rng.hpp"

namespace wh {

namespace {

std::vector<double> cumulative(const std::vector<Rational>& row) {
  std::vector<double> out(row.size());
  Rational acc = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    acc += row[j];
    out[j] = acc.get_d();
  }
  return out;
}

std::vector<bool> reach(const Fsmc& chain, bool backward) {
  const std::size_t n = chain.size();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v) {
      const Rational& w = backward ? chain.p(v, u) : chain.p(u, v);
      if (w > 0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

Fsmc::Fsmc(std::vector<std::string> states, std::vector<std::vector<Rational>> rows)
    : states_(std::move(states)), rows_(std::move(rows)) {
  if (states_.empty()) throw InvalidArgument("chain has no states");
  if (rows_.size() != states_.size()) throw InvalidArgument("row count differs from state count");
  std::map<std::string, int> names;
  for (const auto& s : states_)
    if (!names.emplace(s, 0).second) throw InvalidArgument("duplicate state '" + s + "'");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != states_.size()) throw InvalidArgument("row " + std::to_string(i) + " has wrong length");
    Rational sum = 0;
    for (const auto& q : rows_[i]) {
      if (q < 0) throw InvalidArgument("negative transition probability in row " + std::to_string(i));
      sum += q;
    }
    if (sum != 1) throw InvalidArgument("row " + std::to_string(i) + " sums to " + to_string(sum));
  }
  for (const auto& r : rows_) cdf_.push_back(cumulative(r));
}

Fsmc Fsmc::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("states") || !j.contains("rows")) throw ParseError("chain needs states and rows");
  std::vector<std::string> states = j.at("states").get<std::vector<std::string>>();
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : j.at("rows")) {
    if (!r.is_array()) throw ParseError("chain row must be an array");
    std::vector<Rational> row;
    bool floats = false;
    double fsum = 0;
    for (const auto& x : r) {
      if (x.is_string()) {
        row.push_back(parse_rational(x.get<std::string>()));
      } else if (x.is_number_integer() || x.is_number_unsigned()) {
        row.emplace_back(x.get<long>());
      } else if (x.is_number_float()) {
        floats = true;
        fsum += x.get<double>();
        row.push_back(rational_from_double(x.get<double>()));
      } else {
        throw ParseError("chain entry must be a number or fraction string");
      }
    }
    if (floats) {
      if (std::abs(fsum - 1.0) > 1e-12) throw InvalidArgument("float row sums to " + std::to_string(fsum));
      Rational sum = 0;
      for (const auto& q : row) sum += q;
      if (sum <= 0) throw InvalidArgument("float row has zero mass");
      for (auto& q : row) q /= sum;
    }
    rows.push_back(std::move(row));
  }
  return Fsmc(std::move(states), std::move(rows));
}

nlohmann::json Fsmc::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rows_) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& q : r) row.push_back(to_string(q));
    rows.push_back(std::move(row));
  }
  return {{"states", states_}, {"rows", std::move(rows)}};
}

std::optional<std::size_t> Fsmc::find(const std::string& name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t Fsmc::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw InvalidArgument("unknown state '" + name + "'");
}

Rational Fsmc::max_entry() const {
  Rational m = 0;
  for (const auto& r : rows_)
    for (const auto& q : r) m = std::max(m, q);
  return m;
}

bool is_irreducible(const Fsmc& chain) {
  const auto fwd = reach(chain, false), bwd = reach(chain, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

bool is_tight(const Fsmc& chain) { return chain.max_entry() < 1; }

std::vector<Rational> stationary(const Fsmc& chain) {
  if (!is_irreducible(chain)) throw NotIrreducible();
  const std::size_t n = chain.size();
  // Rows of (P^T - I) with the last equation replaced by sum(mu) = 1.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = chain.p(j, i) - (i == j ? 1 : 0);
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1;
  a[n - 1][n] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw Error("singular stationary system");
    std::swap(a[col], a[pivot]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j <= n; ++j) a[col][j] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = col; j <= n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = a[i][n];
  return mu;
}

Rational mu0_k(const Fsmc& chain, std::span<const Rational> mu0, std::span<const std::size_t> v) {
  if (v.empty()) throw InvalidArgument("mu0_k needs a nonempty block");
  for (std::size_t s : v)
    if (s >= chain.size()) throw InvalidArgument("unknown state index " + std::to_string(s));
  Rational w = mu0[v[0]];
  for (std::size_t i = 1; i < v.size() && w != 0; ++i) w *= chain.p(v[i - 1], v[i]);
  return w;
}

IteratedChain build_iterated(const Fsmc& chain, int k) {
  if (k < 1) throw InvalidArgument("iterated chain needs k >= 1");
  if (!is_irreducible(chain)) throw NotIrreducible();
  const std::size_t n = chain.size();
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t s = 0; s < n; ++s) blocks.push_back({s});
  for (int len = 1; len < k; ++len) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& b : blocks)
      for (std::size_t s = 0; s < n; ++s)
        if (chain.p(b.back(), s) > 0) {
          auto ext = b;
          ext.push_back(s);
          next.push_back(std::move(ext));
        }
    blocks = std::move(next);
  }
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < blocks.size(); ++i) index.emplace(blocks[i], i);
  std::vector<std::string> names;
  for (const auto& b : blocks) {
    std::string name;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) name += kBlockSeparator;
      name += chain.state(b[i]);
    }
    names.push_back(std::move(name));
  }
  std::vector<std::vector<Rational>> rows(blocks.size(), std::vector<Rational>(blocks.size(), 0));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t s = 0; s < n; ++s) {
      if (chain.p(blocks[i].back(), s) == 0) continue;
      std::vector<std::size_t> succ(blocks[i].begin() + 1, blocks[i].end());
      succ.push_back(s);
      rows[i][index.at(succ)] = chain.p(blocks[i].back(), s);
    }
  }
  return IteratedChain{Fsmc(std::move(names), std::move(rows)), std::move(blocks)};
}

std::size_t draw_from_cdf(std::span<const double> cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t i = it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
  // Never land on a zero-probability entry because of rounding at the top.
  while (i > 0 && cdf[i] == cdf[i - 1]) --i;
  return i;
}

std::vector<std::size_t> sample(const Fsmc& chain, std::span<const Rational> mu, std::size_t n, std::uint64_t seed) {
  if (mu.size() != chain.size()) throw InvalidArgument("initial distribution has wrong size");
  std::vector<Rational> init(mu.begin(), mu.end());
  Rational total = 0;
  for (const auto& q : init) {
    if (q < 0) throw InvalidArgument("negative initial probability");
    total += q;
  }
  if (total != 1) throw InvalidArgument("initial distribution does not sum to 1");
  const std::vector<double> init_cdf = cumulative(init);
  const CounterRng rng(seed);
  std::vector<std::size_t> out;
  out.reserve(n);
  if (n == 0) return out;
  out.push_back(draw_from_cdf(init_cdf, rng.uniform_at(0)));
  for (std::size_t i = 1; i < n; ++i) out.push_back(draw_from_cdf(chain.cdf(out.back()), rng.uniform_at(i)));
  return out;
}

}  // namespace wh
