#pragma once

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11). Each
// trajectory gets an independent stream keyed by (master seed, stream id), so
// results are reproducible regardless of how trajectories are scheduled.

#include <array>
#include <cstdint>

namespace qemforge {

class PhiloxRng {
 public:
  PhiloxRng(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  // Uniform double in [0, 1) from 53 random bits.
  double uniform() {
    const std::uint64_t hi = next32();
    const std::uint64_t lo = next32();
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  std::uint32_t next32() {
    if (have_ == 0) {
      block_ = round10(counter_, key_);
      // increment the low 64 bits of the counter
      if (++counter_[0] == 0) ++counter_[1];
      have_ = 4;
    }
    return block_[4 - have_--];
  }

 private:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;

  static Block round10(Block ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
      Block next;
      next[0] = static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0];
      next[1] = static_cast<std::uint32_t>(p1);
      next[2] = static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1];
      next[3] = static_cast<std::uint32_t>(p0);
      ctr = next;
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    return ctr;
  }

  Key key_;
  Block counter_;
  Block block_{};
  int have_ = 0;
};

// Compensated (Kahan) accumulator for deterministic fixed-order reductions.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace qemforge
