#pragma once

#include <cstdint>
#include <string_view>

namespace mcol {

// Deterministic splittable generator (splitmix64 core). Every consumer of
// randomness derives its own stream from (master seed, stream label, index),
// so environments, paths and agent choices can be varied independently and
// results stay byte-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased bounded draw in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  template <typename T>
  void shuffle(T& seq) {
    for (std::size_t i = seq.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(seq[i - 1], seq[j]);
    }
  }

  // Derives a child stream; label keeps streams apart even for equal indices.
  static Rng stream(std::uint64_t master, std::string_view label, std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
      h ^= static_cast<std::uint8_t>(c);
      h *= 0x100000001b3ULL;
    }
    Rng mix(master ^ h);
    mix.next_u64();
    return Rng(mix.next_u64() ^ (index * 0xda942042e4dd58b5ULL));
  }

 private:
  std::uint64_t state_;
};

}  // namespace mcol
