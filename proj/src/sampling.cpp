#include "supermag/sampling.hpp"

namespace supermag {

std::uint64_t CounterRng::next_u64() {
  std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Vec3<double> sample_safe_position(CounterRng& rng) {
  Vec3<double> q;
  for (double& c : q) {
    double mag = rng.uniform(safe_q_min, safe_q_max);
    c = rng.uniform() < 0.5 ? -mag : mag;
  }
  return q;
}

PhasePoint sample_safe_point(CounterRng& rng) {
  PhasePoint s;
  s.q = sample_safe_position(rng);
  for (double& c : s.p) c = rng.uniform(-safe_p_max, safe_p_max);
  return s;
}

PhasePoint sample_safe_point(CounterRng& rng, const std::function<bool(const PhasePoint&)>& accept,
                             int max_tries) {
  for (int i = 0; i < max_tries; ++i) {
    PhasePoint s = sample_safe_point(rng);
    try {
      if (accept(s)) return s;
    } catch (const std::exception&) {
      // singular draw; resample
    }
  }
  throw DomainError("no acceptable sample point found");
}

std::vector<Vec3<double>> safe_grid(int n) {
  std::vector<double> axis;
  for (int k = 0; k < n; ++k) {
    double mag = n == 1 ? safe_q_min : safe_q_min + (safe_q_max - safe_q_min) * k / (n - 1);
    axis.push_back(k % 2 == 0 ? mag : -mag);
  }
  std::vector<Vec3<double>> grid;
  for (double x : axis)
    for (double y : axis)
      for (double z : axis) grid.push_back({x, y, z});
  return grid;
}

}  // namespace supermag
