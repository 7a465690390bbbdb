#ifndef EPSK_RNG_HPP
#define EPSK_RNG_HPP

#include <cstdint>

namespace epsk {

// Counter-based 64-bit generator (SplitMix64 finalizer over key + counter).
// Gaussian variates use the Marsaglia polar method. Both choices are fixed
// so that seeded streams reproduce bit-identically across platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform in [0,1), 53-bit resolution.
  double next_double();
  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi);
  // N(0, 1) via the polar method.
  double next_normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Substream derivation for per-trial seeding.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace epsk

#endif  // EPSK_RNG_HPP
