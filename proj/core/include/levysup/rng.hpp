#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace levysup {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The key is derived from (seed, domain) and the
/// counter carries the replication index, so the n-th replication sees the same
/// numbers no matter which worker runs it or in which order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t index, std::uint32_t domain = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }
  double exponential(double rate) { return -std::log(uniform_open_left()) / rate; }
  /// Number of successes before the first failure when P(success) = p.
  std::uint64_t geometric(double p);

  std::uint64_t blocks_used() const { return block_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int cursor_ = 4;
};

}  // namespace levysup
