// Counter-based deterministic random streams. Every draw is a pure
// function of (root seed, stream name, counter), so results do not
// depend on evaluation order or thread count. std:: distributions are
// avoided on purpose: their output is implementation-defined.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace vls::rng {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view name)
      : key_(mix64(seed ^ fnv1a(name))) {}

  // uniform in [0, 1)
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // uniform in [0, 2pi)
  double angle(std::uint64_t counter) const {
    return uniform(counter) * 6.283185307179586476925286766559;
  }

  // standard normal via Box-Muller; consumes counters 2k and 2k+1
  double normal(std::uint64_t counter) const {
    double u1 = 1.0 - uniform(2 * counter);      // (0, 1]
    double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ ^ mix64(counter));
  }

 private:
  std::uint64_t key_;
};

}  // namespace vls::rng
