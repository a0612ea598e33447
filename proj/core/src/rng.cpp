#include "wh/rng.hpp"

namespace wh {

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

std::uint64_t trial_seed(std::uint64_t master, std::string_view experiment, std::uint64_t n,
                         std::uint64_t trial) {
  return mix_seed({master, hash_string(experiment), n, trial});
}

std::uint64_t CounterRng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = max() - max() % n;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x < limit) return x % n;
  }
}

}  // namespace wh
