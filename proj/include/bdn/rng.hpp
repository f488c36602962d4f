#pragma once

#include <cstdint>

namespace bdn {

// Counter-based splittable random stream. A stream is identified by a 64-bit
// key derived from (seed, stream_id); the i-th output is a strong mix of
// key + i. Distinct keys give statistically independent sequences, and a
// stream's output depends only on its key and draw count, so per-sample
// parallel updates stay reproducible regardless of thread scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();
  double next_uniform();     // strictly inside (0, 1)
  double next_normal();      // standard normal via inverse CDF
  double next_exponential(); // rate-1 exponential

  // Child stream, independent of this stream's position and of children
  // forked with different (a, b).
  RngStream fork(std::uint64_t a, std::uint64_t b = 0) const;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bdn
