#include "bdn/rng.hpp"

#include <cmath>

#include "bdn/normal.hpp"

namespace bdn {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(mix64(seed + kGolden) ^ mix64(stream_id + 0xD1B54A32D192ED03ull));
}
}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(derive_key(seed, stream_id)) {}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::next_uniform() {
  // 53-bit mantissa shifted to the open interval (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() { return normal_quantile(next_uniform()); }

double RngStream::next_exponential() { return -std::log(next_uniform()); }

RngStream RngStream::fork(std::uint64_t a, std::uint64_t b) const {
  RngStream child(0, 0);
  child.key_ = derive_key(key_, mix64(a + kGolden) + b);
  child.counter_ = 0;
  return child;
}

}  // namespace bdn
