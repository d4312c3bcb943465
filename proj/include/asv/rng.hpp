#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace asv {

constexpr uint64_t fnv1a(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent seed from (master, stream name, index).  Named
// sub-streams keep consumers decoupled: adding draws to one stream does not
// shift the sequences of the others.
inline uint64_t derive_seed(uint64_t master, std::string_view name, uint64_t index = 0) {
  uint64_t x = master ^ fnv1a(name);
  splitmix64(x);
  x ^= 0xd1342543de82ef95ull * (index + 1);
  splitmix64(x);
  return splitmix64(x);
}

// Seeded generator wrapping mt19937_64 with stdlib-independent helpers, so a
// given seed yields the same draws on every platform we build on.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  static Rng stream(uint64_t master, std::string_view name, uint64_t index = 0) {
    return Rng(derive_seed(master, name, index));
  }

  uint64_t next_u64() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased draw from [0, n).
  uint64_t uniform_u64(uint64_t n) {
    uint64_t x, r;
    do {
      x = eng_();
      r = x % n;
    } while (x - r > std::numeric_limits<uint64_t>::max() - (n - 1));
    return r;
  }

  int uniform_int(int n) { return static_cast<int>(uniform_u64(static_cast<uint64_t>(n))); }

  // Box-Muller without a cached spare; two uniforms per draw.
  double normal(double mu = 0.0, double sd = 1.0) {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    return mu + sd * mag * std::cos(2.0 * M_PI * u2);
  }

  std::string serialize() const {
    std::ostringstream os;
    os << eng_;
    return os.str();
  }

  void deserialize(const std::string& s) {
    std::istringstream is(s);
    is >> eng_;
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace asv
