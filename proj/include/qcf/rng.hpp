// Counter-based splittable random stream.
//
// Every draw is a pure function of (key, counter), and child streams derive
// their key from the parent key and a caller-chosen stream id, so a trial,
// a party, or a single qubit pair can each own an independent stream that
// reproduces bit-for-bit from the top-level seed alone. No libc or libstdc++
// distribution code is involved, so transcripts replay across platforms.

#pragma once

#include <cstdint>

namespace qcf {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : key_(mix(seed ^ kGamma)) {}

  // Independent child stream; (seed, path of ids) determines all its output.
  RandomStream split(std::uint64_t stream_id) const {
    return RandomStream(mix(key_ ^ mix(stream_id + kGamma)), 0);
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  int coin() { return static_cast<int>(next_u64() >> 63); }

  // Uniform in [0, bound); bound > 0. Multiply-shift map, deterministic.
  std::uint32_t uniform_int(std::uint32_t bound) {
    const std::uint64_t x = next_u64() >> 32;
    return static_cast<std::uint32_t>((x * bound) >> 32);
  }

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter) : key_(key), counter_(counter) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qcf
