#include "mixtest/rng.hpp"

#include "mixtest/normal.hpp"

namespace mixtest {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(mix(seed + kGolden * (index + 1)));
}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double RandomStream::next_uniform() {
  // 53 high bits, centered on the cell midpoint: never 0, never 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_normal() { return std_normal_quantile(next_uniform()); }

}  // namespace mixtest
