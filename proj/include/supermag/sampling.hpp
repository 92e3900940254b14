#ifndef SUPERMAG_SAMPLING_HPP
#define SUPERMAG_SAMPLING_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "supermag/phase.hpp"

namespace supermag {

inline constexpr std::uint64_t default_seed = 0x5EED;

// Counter-based generator: draw k is splitmix64(seed + k * golden), so any
// draw can be reproduced from (seed, k) alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = default_seed) : seed_(seed) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Safe box: each position component drawn from +-[0.3, 2] (so r >= 0.3 and
// |z| >= 0.3), each momentum from [-2, 2].
inline constexpr double safe_q_min = 0.3;
inline constexpr double safe_q_max = 2.0;
inline constexpr double safe_p_max = 2.0;

Vec3<double> sample_safe_position(CounterRng& rng);
PhasePoint sample_safe_point(CounterRng& rng);

// Draws until accept(point) returns true, at most max_tries times; throws
// DomainError after that.
PhasePoint sample_safe_point(CounterRng& rng, const std::function<bool(const PhasePoint&)>& accept,
                             int max_tries = 1000);

// n^3 positions with each axis taking the values (-1)^k (0.3 + 1.7 k/(n-1)).
std::vector<Vec3<double>> safe_grid(int n);

}  // namespace supermag

#endif  // SUPERMAG_SAMPLING_HPP
