#ifndef PROJLDP_RNG_HPP_
#define PROJLDP_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace projldp {

// Addresses a deterministic random stream: fixed (seed, stream) always
// reproduces the same draws. Distinct streams are statistically independent,
// which is what the chunked Monte Carlo drivers rely on.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngSpec with_stream(std::uint64_t s) const { return {seed, s}; }
};

// mt19937_64 addressed by (seed, stream). The uniform/normal transforms are
// hand-rolled on top of the raw engine output, so the produced sequence does
// not depend on the standard library's unspecified distribution algorithms.
class Rng {
 public:
  explicit Rng(RngSpec spec) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
        static_cast<std::uint32_t>(spec.stream), static_cast<std::uint32_t>(spec.stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [-1, 1).
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  // +1 or -1 with equal probability.
  double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }

  // Standard normal via Box-Muller; generates pairs, caches the second.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]; keeps log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace projldp

#endif  // PROJLDP_RNG_HPP_
