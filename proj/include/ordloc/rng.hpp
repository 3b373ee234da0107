#pragma once

#include <cstdint>

namespace ordloc {

// Counter-based uniform generator. Every variate is a pure function of
// (seed, stream, position), so parallel consumers can pull from disjoint
// positions without sharing state and a re-run with the same seed
// reproduces every draw bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  // Strictly inside (0, 1); never returns an endpoint.
  double uniform() { return uniform_at(seed_, stream_, pos_++); }

  void seek(std::uint64_t pos) { pos_ = pos; }
  std::uint64_t position() const { return pos_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  static double uniform_at(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t pos) {
    std::uint64_t h = mix(seed + 1);
    h = mix(h + stream * kGolden);
    h = mix(h + pos * kGolden);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t pos_ = 0;
};

}  // namespace ordloc
