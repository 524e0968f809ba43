#pragma once

#include <cstdint>

namespace alliance {

// Stream tags keep the independent random streams of one seed apart.
enum class Stream : std::uint64_t {
  kWalk = 1,
  kCarrier = 2,
  kSegment = 3,
  kGenerator = 4,
  kPairSampling = 5,
  kBaseline = 6,
};

/// Counter-based generator: the value at position n of stream
/// (seed, tag, a, b) is a pure function of those five numbers, so any
/// (root, walk, step) draw can be produced by any thread in any order.
/// SplitMix64 finaliser over a derived key.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, Stream tag, std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t k = mix(seed + kGamma);
    k = mix(k ^ (static_cast<std::uint64_t>(tag) * kGamma));
    k = mix(k ^ (a + kGamma));
    k = mix(k ^ (b * kGamma + 0x632be59bd9b4e019ULL));
    key_ = k;
  }

  std::uint64_t at(std::uint64_t counter) const { return mix(key_ + (counter + 1) * kGamma); }
  std::uint64_t next() { return at(counter_++); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t counter) const { return static_cast<double>(at(counter) >> 11) * 0x1.0p-53; }
  double uniform() { return uniform_at(counter_++); }

  // Uniform integer in [0, n), n > 0 (Lemire multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    for (;;) {
      const u128 m = static_cast<u128>(next()) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace alliance
