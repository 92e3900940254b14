#include "supermag/coords.hpp"

#include <cmath>
#include <numbers>

namespace supermag {

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::circular_parabolic: return "circular_parabolic";
    case ChartKind::oblate_spheroidal: return "oblate_spheroidal";
    case ChartKind::prolate_spheroidal: return "prolate_spheroidal";
    case ChartKind::cylindrical: return "cylindrical";
    case ChartKind::spherical: return "spherical";
  }
  return "unknown";
}

void check_chart_domain(const CurvilinearCoords& c) {
  constexpr double pi = std::numbers::pi;
  const auto& [u, v, w] = c.values;
  for (double x : c.values) {
    if (!std::isfinite(x)) throw DomainError("non-finite chart coordinate");
  }
  auto fail = [&c](const char* what) {
    throw DomainError(to_string(c.kind) + ": " + what);
  };
  switch (c.kind) {
    case ChartKind::circular_parabolic:
      if (!(u > 0.0 && v > 0.0)) fail("requires xi > 0 and eta > 0");
      if (!(w >= 0.0 && w < 2.0 * pi)) fail("requires phi in [0, 2pi)");
      break;
    case ChartKind::oblate_spheroidal:
      if (!(c.a > 0.0)) fail("requires a > 0");
      if (!(u >= 0.0)) fail("requires xi >= 0");
      if (!(v > 0.0 && v < pi)) fail("requires eta in (0, pi)");
      if (!(w >= 0.0 && w < 2.0 * pi)) fail("requires phi in [0, 2pi)");
      break;
    case ChartKind::prolate_spheroidal:
      if (!(c.a > 0.0)) fail("requires a > 0");
      if (!(u > 0.0)) fail("requires xi > 0");
      if (!(v > 0.0 && v < pi)) fail("requires eta in (0, pi)");
      if (!(w >= 0.0 && w < 2.0 * pi)) fail("requires phi in [0, 2pi)");
      break;
    case ChartKind::cylindrical:
      if (!(u >= 0.0)) fail("requires r >= 0");
      if (!(v >= 0.0 && v < 2.0 * pi)) fail("requires theta in [0, 2pi)");
      break;
    case ChartKind::spherical:
      if (!(u >= 0.0)) fail("requires R >= 0");
      if (!(v >= 0.0 && v <= pi)) fail("requires polar angle in [0, pi]");
      if (!(w >= 0.0 && w < 2.0 * pi)) fail("requires azimuth in [0, 2pi)");
      break;
  }
}

Vec3<double> to_cartesian(const CurvilinearCoords& c) {
  check_chart_domain(c);
  return chart::forward<double>(c.kind, c.values, c.a);
}

}  // namespace supermag
