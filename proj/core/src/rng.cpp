#include "levysup/rng.hpp"

#include <stdexcept>

namespace levysup {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index, std::uint32_t domain)
    : index_(index) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(0xA5A5A5A500000000ULL | domain));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

void RandomStream::refill() {
  buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                        static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32)},
                       key_);
  ++block_;
  cursor_ = 0;
}

RandomStream::result_type RandomStream::operator()() {
  if (cursor_ >= 4) refill();
  const std::uint64_t hi = buffer_[cursor_];
  const std::uint64_t lo = buffer_[cursor_ + 1];
  cursor_ += 2;
  return (hi << 32) | lo;
}

std::uint64_t RandomStream::geometric(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("geometric: success probability must lie in [0,1)");
  if (p == 0.0) return 0;
  // P(N >= k) = p^k
  return static_cast<std::uint64_t>(std::floor(std::log(uniform_open_left()) / std::log(p)));
}

}  // namespace levysup
