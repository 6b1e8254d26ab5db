#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace cyclesparse {

// Deterministic generator built on splitmix64. std::mt19937 with the
// standard distributions is implementation-defined across library versions;
// everything here is pinned bit-for-bit so seeded runs replay identically.
//
// Stream derivation: a stream is keyed by (seed, module, op, path_index).
// Tags are folded in with FNV-1a; the resulting state is advanced twice so
// nearby keys do not produce nearby streams.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {
    u64();
    u64();
  }

  std::uint64_t u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n), n >= 1. Rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (u64() >> 63) != 0; }

  // +1 or -1.
  int pm1() { return coin() ? 1 : -1; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream; path distinguishes siblings.
  Prng split(std::uint64_t path) const {
    Prng child(state_ ^ 0x5851f42d4c957f2dULL);
    child.state_ += 0x9e3779b97f4a7c15ULL * (path + 1);
    child.u64();
    return child;
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  static Prng stream(std::uint64_t seed, std::string_view module,
                     std::string_view op, std::uint64_t path = 0) {
    std::uint64_t s = seed;
    s ^= fnv1a(module) + 0x9e3779b97f4a7c15ULL;
    s *= 0xff51afd7ed558ccdULL;
    s ^= fnv1a(op) + 0x9e3779b97f4a7c15ULL;
    s *= 0xc4ceb9fe1a85ec53ULL;
    s ^= path;
    return Prng(s);
  }

 private:
  std::uint64_t state_;
};

}  // namespace cyclesparse
