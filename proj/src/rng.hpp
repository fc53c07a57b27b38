#pragma once
#include <cstdint>
#include <cmath>

namespace sic {

namespace rngdetail {
inline constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
} // namespace rngdetail

// Counter-based stream generator: draw n of stream (seed, sid) is
// mix64(base(seed, sid) + n * gamma). Streams are independent of the order in
// which they are realized, so replicas and per-site/per-edge streams can be
// built in any order (or in parallel) and still reproduce bit-identically.
class CounterRng {
public:
  CounterRng(uint64_t seed, uint64_t sid)
      : base_(rngdetail::mix64(seed ^ rngdetail::mix64(sid + 0x6a09e667f3bcc909ULL))) {}

  uint64_t next_u64() { return rngdetail::mix64(base_ + (n_++) * rngdetail::kGamma); }

  // uniform strictly inside (0,1), 53-bit resolution
  double next_u01() { return (double)(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  // exponential inter-arrival time at the given rate
  double next_exp(double rate) { return -std::log(next_u01()) / rate; }

  void skip(uint64_t k) { n_ += k; }

private:
  uint64_t base_;
  uint64_t n_ = 0;
};

// child seed for replica / purpose k; mixing keeps replica seed spaces disjoint
inline uint64_t derive_seed(uint64_t seed, uint64_t k) {
  return rngdetail::mix64(seed ^ rngdetail::mix64(k * rngdetail::kGamma + 0x85ebca6b0f4a7c15ULL));
}

} // namespace sic
