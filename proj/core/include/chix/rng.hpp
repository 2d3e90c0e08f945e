#pragma once

#include <cstdint>
#include <cmath>

namespace chix {

// Counter-based random streams: every (master seed, stream id) pair yields an
// independent reproducible sequence, so replicate r always sees the same draws
// no matter which worker runs it or in what order.
//
// The generator is SplitMix64 seeded by a mix of (master, stream). SplitMix64's
// output function is a full-period 64-bit bijection with good avalanche;
// one instance per replicate is cheap enough to create in inner loops.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : state_(mix(master_seed ^ mix(stream_id + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // uniform on (0, 1]
  double next_unit() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // standard normal, Marsaglia polar method; draws come in pairs, second one
  // cached. Rejection consumes a variable number of uniforms, which is fine:
  // streams are per-replicate, so consumption never leaks across replicates.
  double next_normal() noexcept {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    for (;;) {
      const double x = 2.0 * next_unit() - 1.0;
      const double y = 2.0 * next_unit() - 1.0;
      const double s = x * x + y * y;
      if (s >= 1.0 || s == 0.0) continue;
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      cached_ = y * f;
      have_cached_ = true;
      return x * f;
    }
  }

  static std::uint64_t mix(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Stable stream ids for the independent sub-jobs of one run. Tags keep the
// streams of different consumers (components, tiers, diagnostics) disjoint.
inline std::uint64_t stream_id(std::uint64_t tag, std::uint64_t replicate,
                               std::uint64_t component = 0) noexcept {
  return RngStream::mix(tag * 0x9E3779B97F4A7C15ULL + component) + replicate;
}

}  // namespace chix
