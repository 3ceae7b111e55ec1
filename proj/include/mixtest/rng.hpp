#pragma once

#include <cstdint>

namespace mixtest {

// SplitMix64 stream. Sub-streams are derived from (seed, index) by remixing,
// so replicate r's draws never depend on how work is scheduled across
// workers. Normal variates use the inverse-CDF transform: every draw consumes
// exactly one uniform, keeping streams aligned across platforms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  double next_uniform();  // strictly inside (0, 1)
  double next_normal();

 private:
  std::uint64_t state_;
};

}  // namespace mixtest
