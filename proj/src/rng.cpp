#include "kboot/rng.hpp"

#include <cmath>

namespace kboot {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t prod = std::uint64_t(a) * std::uint64_t(b);
  hi = std::uint32_t(prod >> 32);
  lo = std::uint32_t(prod);
}

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mul_hi_lo(kPhiloxM0, ctr[0], hi0, lo0);
  mul_hi_lo(kPhiloxM1, ctr[2], hi1, lo1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

RandomStream::RandomStream(SeedSpec seed) noexcept : seed_(seed) {
  key_ = {std::uint32_t(seed.master_seed), std::uint32_t(seed.master_seed >> 32)};
  counter_ = {0u, 0u, std::uint32_t(seed.stream_id),
              std::uint32_t(seed.stream_id >> 32)};
}

void RandomStream::refill() noexcept {
  block_ = counter_;
  auto key = key_;
  for (int round = 0; round < 10; ++round) {
    philox_round(block_, key);
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  block_pos_ = 0;
  // 64-bit block index in words 0..1; words 2..3 hold the stream id.
  if (++counter_[0] == 0) ++counter_[1];
}

std::uint64_t RandomStream::next_u64() noexcept {
  if (block_pos_ >= 3) refill();
  const std::uint64_t lo = block_[block_pos_];
  const std::uint64_t hi = block_[block_pos_ + 1];
  block_pos_ += 2;
  return lo | (hi << 32);
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  for (;;) {
    const double u = 2.0 * uniform01() - 1.0;
    const double v = 2.0 * uniform01() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }
}

}  // namespace kboot
