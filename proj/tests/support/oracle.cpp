#include "oracle.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace oracle {

char inv(char c) { return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c)) : static_cast<char>(std::tolower(c)); }

int code(char c) {
  const int idx = std::tolower(static_cast<unsigned char>(c)) - 'a';
  return 2 * idx + (std::isupper(static_cast<unsigned char>(c)) ? 1 : 0);
}

bool less_word(const std::string& x, const std::string& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                      [](char p, char q) { return code(p) < code(q); });
}

std::string inverse(const std::string& w) {
  std::string r(w.rbegin(), w.rend());
  for (char& c : r) c = inv(c);
  return r;
}

std::string reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() == inv(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string cyclic_core(const std::string& w) {
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == inv(w[j - 1])) {
    ++i;
    --j;
  }
  return w.substr(i, j - i);
}

std::string least_rotation(const std::string& w) {
  std::string best = w;
  for (std::size_t r = 1; r < w.size(); ++r) {
    std::string cand = w.substr(r) + w.substr(0, r);
    if (less_word(cand, best)) best = cand;
  }
  return best;
}

std::string canon(const std::string& w) { return least_rotation(cyclic_core(reduce(w))); }

bool is_reduced(const std::string& w) { return reduce(w) == w; }

bool is_cyclically_reduced(const std::string& w) {
  return is_reduced(w) && (w.size() < 2 || w.front() != inv(w.back()));
}

namespace {

std::string letters(int rank) {
  std::string s;
  for (int i = 0; i < rank; ++i) {
    s += static_cast<char>('a' + i);
    s += static_cast<char>('A' + i);
  }
  return s;
}

void all_strings(int rank, std::size_t len, const std::function<void(const std::string&)>& f) {
  const std::string sigma = letters(rank);
  std::string cur(len, 'a');
  std::vector<std::size_t> idx(len, 0);
  for (;;) {
    for (std::size_t i = 0; i < len; ++i) cur[i] = sigma[idx[i]];
    f(cur);
    std::size_t k = len;
    while (k > 0) {
      --k;
      if (++idx[k] < sigma.size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (len == 0) return;
  }
}

}  // namespace

std::vector<std::string> all_reduced(int rank, std::size_t len) {
  std::vector<std::string> out;
  all_strings(rank, len, [&](const std::string& s) {
    if (is_reduced(s)) out.push_back(s);
  });
  return out;
}

std::vector<std::string> all_classes(int rank, std::size_t len) {
  std::set<std::string, decltype(&less_word)> seen(&less_word);
  all_strings(rank, len, [&](const std::string& s) {
    if (is_cyclically_reduced(s)) seen.insert(least_rotation(s));
  });
  return {seen.begin(), seen.end()};
}

std::size_t occurrences(const std::string& v, const std::string& w) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < v.size() && ok; ++j) ok = w[(i + j) % w.size()] == v[j];
    n += ok;
  }
  return n;
}

std::string Aut::key() const {
  std::string k;
  for (const auto& s : images) k += s + ",";
  return k;
}

std::string apply(const Aut& f, const std::string& w) {
  std::string raw;
  for (char c : w) {
    const int idx = std::tolower(static_cast<unsigned char>(c)) - 'a';
    raw += std::islower(static_cast<unsigned char>(c)) ? f.images[idx] : inverse(f.images[idx]);
  }
  return reduce(raw);
}

std::vector<Aut> relabelings(int rank) {
  std::vector<Aut> out;
  std::vector<int> perm(rank);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int mask = 0; mask < (1 << rank); ++mask) {
      Aut f;
      bool identity = true;
      for (int i = 0; i < rank; ++i) {
        char c = static_cast<char>('a' + perm[i]);
        if (mask >> i & 1) c = inv(c);
        f.images.emplace_back(1, c);
        identity = identity && c == 'a' + i;
      }
      if (!identity) out.push_back(f);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<Aut> whitehead_auts(int rank) {
  std::vector<Aut> out = relabelings(rank);
  std::set<std::string> keys;
  for (const auto& f : out) keys.insert(f.key());
  const std::string sigma = letters(rank);
  // (A, a): A contains a but not a^-1; x -> x a if x in A, a^-1 x if x^-1 in A.
  for (char a : sigma) {
    std::string others;
    for (char c : sigma)
      if (c != a && c != inv(a)) others += c;
    for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
      std::set<char> A{a};
      for (std::size_t i = 0; i < others.size(); ++i)
        if (mask >> i & 1) A.insert(others[i]);
      Aut f;
      for (int i = 0; i < rank; ++i) {
        const char x = static_cast<char>('a' + i);
        std::string img(1, x);
        if (x != a && x != inv(a)) {
          if (A.count(x)) img = img + a;
          if (A.count(inv(x))) img = std::string(1, inv(a)) + img;
        }
        f.images.push_back(img);
      }
      bool identity = true;
      for (int i = 0; i < rank; ++i) identity = identity && f.images[i] == std::string(1, static_cast<char>('a' + i));
      if (identity || !keys.insert(f.key()).second) continue;
      out.push_back(f);
    }
  }
  return out;
}

bool is_inner(const Aut& f) {
  const int rank = static_cast<int>(f.images.size());
  for (char a : letters(rank)) {
    bool all = true;
    for (int i = 0; i < rank && all; ++i) {
      const char x = static_cast<char>('a' + i);
      all = f.images[i] == reduce(std::string(1, inv(a)) + x + a);
    }
    if (all) return true;
  }
  return false;
}

std::map<std::string, int> orbit_partition(int rank, const std::vector<std::string>& seeds, std::size_t cap) {
  const auto auts = whitehead_auts(rank);
  std::map<std::string, int> label;
  int next = 0;
  for (const auto& s : seeds) {
    const std::string c = canon(s);
    if (label.count(c)) continue;
    const int id = next++;
    std::deque<std::string> q{c};
    label[c] = id;
    while (!q.empty()) {
      const std::string u = q.front();
      q.pop_front();
      for (const auto& f : auts) {
        const std::string v = canon(apply(f, u));
        if (v.size() > cap || label.count(v)) continue;
        label[v] = id;
        q.push_back(v);
      }
    }
  }
  return label;
}

std::vector<std::string> orbit_within(int rank, const std::string& c, std::size_t cap) {
  std::vector<std::string> out;
  for (const auto& [k, v] : orbit_partition(rank, {c}, cap)) out.push_back(k);
  std::sort(out.begin(), out.end(), less_word);
  return out;
}

std::size_t min_orbit_length(int rank, const std::string& c, std::size_t cap) {
  std::size_t best = canon(c).size();
  for (const auto& [k, v] : orbit_partition(rank, {c}, cap)) best = std::min(best, k.size());
  return best;
}

}  // namespace oracle
