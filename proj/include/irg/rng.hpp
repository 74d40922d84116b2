// Seeded random number streams with a documented cross-platform draw
// discipline. All randomness in the library flows through RngStream so
// that a (master_seed, stream_id) pair pins every experiment bit-for-bit.
//
// Stream derivation: stream_id = mix64(master_seed, index) where mix64 is
// the splitmix64-based function below. Uniform doubles are built from the
// top 53 bits of a std::mt19937_64 draw, so results do not depend on the
// platform's std::uniform_real_distribution.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace irg {

// One splitmix64 step (Vigna). Used both as a seed mixer and to derive
// per-trial stream ids.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Documented mixing function: mix64(a, b) folds b into a. Independent
// implementations can replicate streams from this definition alone.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b), c);
}

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed),
        stream_id_(stream_id),
        engine_(mix64(master_seed, stream_id)) {}

  explicit RngStream(std::uint64_t master_seed) : RngStream(master_seed, 0) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Derive a child stream; used to give each trial its own stream.
  RngStream substream(std::uint64_t index) const {
    return RngStream(master_seed_, mix64(stream_id_, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1): top 53 bits of a 64-bit draw.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1. Lemire multiply-shift with
  // rejection; exact and identical on every platform with __uint128_t.
  std::uint64_t next_bounded(std::uint64_t bound) {
    std::uint64_t x = engine_();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        x = engine_();
        m = static_cast<unsigned __int128>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int next_int(int bound) { return static_cast<int>(next_bounded(static_cast<std::uint64_t>(bound))); }

  // Random subset of {0,...,n-1} of the given size, sorted ascending.
  // Partial Fisher-Yates over an index array.
  std::vector<int> sample_subset(int n, int size);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace irg
