#pragma once

#include <array>
#include <cstdint>

namespace kboot {

// Identifies one independent random stream. The mapping
// (master_seed, stream_id) -> generator state is injective: the master
// seed becomes the Philox key and the stream id occupies the high 64
// bits of the 128-bit counter, so distinct seeds or streams can never
// collide. Stream ids are allocated in documented blocks by the
// consumers (one stream per bootstrap replicate, per repetition, ...);
// see README "Reproducibility".
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// Counter-based generator: Philox4x32 with 10 rounds (Salmon et al.,
// SC 2011). Counter-based means the output block is a pure function of
// (key, counter); jumping to any stream is O(1) and streams never
// share state. All derived variates (uniform, normal, bounded ints)
// use fixed algorithms so that identical seeds give bitwise-identical
// sequences on any platform with IEEE-754 doubles.
class RandomStream {
 public:
  explicit RandomStream(SeedSpec seed) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on [0,1), 53 random bits.
  double uniform01() noexcept { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Multiply-shift mapping; bias is at most
  // n / 2^64 and irrelevant at the sizes used here.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Marsaglia's polar method; the rejected pair
  // count varies but consumption order is fixed, so the stream stays
  // reproducible. The spare value is cached.
  double normal() noexcept;

  SeedSpec seed() const noexcept { return seed_; }

 private:
  void refill() noexcept;

  SeedSpec seed_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;  // [0..1] block index, [2..3] stream id
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;  // 4 = block exhausted
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace kboot
