#ifndef SUPERMAG_COORDS_HPP
#define SUPERMAG_COORDS_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "supermag/dual.hpp"
#include "supermag/errors.hpp"
#include "supermag/phase.hpp"

namespace supermag {

enum class ChartKind { circular_parabolic, oblate_spheroidal, prolate_spheroidal, cylindrical, spherical };

std::string to_string(ChartKind kind);

// A point in one of the axially symmetric charts. `values` is (xi, eta, phi)
// for the non-subgroup kinds, (r, theta, z) for cylindrical and
// (R, polar, azimuth) for spherical. `a` is used by the spheroidal kinds only.
struct CurvilinearCoords {
  ChartKind kind = ChartKind::cylindrical;
  std::array<double, 3> values{};
  double a = 1.0;
};

// Throws DomainError when c lies outside its chart's open domain.
void check_chart_domain(const CurvilinearCoords& c);

Vec3<double> to_cartesian(const CurvilinearCoords& c);

namespace chart {

// Forward map and its Jacobian J[i][j] = d x_i / d u_j, generic in the scalar
// type so families can be differentiated through the chart.
template <class T>
Vec3<T> forward(ChartKind kind, const Vec3<T>& u, double a) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  switch (kind) {
    case ChartKind::circular_parabolic: {
      T rho = u[0] * u[1];
      return {rho * cos(u[2]), rho * sin(u[2]), 0.5 * (u[0] * u[0] - u[1] * u[1])};
    }
    case ChartKind::oblate_spheroidal: {
      T rho = a * cosh(u[0]) * sin(u[1]);
      return {rho * cos(u[2]), rho * sin(u[2]), a * sinh(u[0]) * cos(u[1])};
    }
    case ChartKind::prolate_spheroidal: {
      T rho = a * sinh(u[0]) * sin(u[1]);
      return {rho * cos(u[2]), rho * sin(u[2]), a * cosh(u[0]) * cos(u[1])};
    }
    case ChartKind::cylindrical:
      return {u[0] * cos(u[1]), u[0] * sin(u[1]), u[2]};
    case ChartKind::spherical: {
      T rho = u[0] * sin(u[1]);
      return {rho * cos(u[2]), rho * sin(u[2]), u[0] * cos(u[1])};
    }
  }
  return {};
}

template <class T>
std::array<Vec3<T>, 3> jacobian(ChartKind kind, const Vec3<T>& u, double a) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  std::array<Vec3<T>, 3> J;
  auto fill_axial = [&J](const T& drho_du0, const T& dz_du0, const T& drho_du1, const T& dz_du1,
                         const T& rho, const T& phi) {
    T c = cos(phi);
    T s = sin(phi);
    J[0] = {drho_du0 * c, drho_du1 * c, -rho * s};
    J[1] = {drho_du0 * s, drho_du1 * s, rho * c};
    J[2] = {dz_du0, dz_du1, T(0.0)};
  };
  switch (kind) {
    case ChartKind::circular_parabolic:
      fill_axial(u[1], u[0], u[0], -u[1], u[0] * u[1], u[2]);
      break;
    case ChartKind::oblate_spheroidal:
      fill_axial(a * sinh(u[0]) * sin(u[1]), a * cosh(u[0]) * cos(u[1]),
                 a * cosh(u[0]) * cos(u[1]), -a * sinh(u[0]) * sin(u[1]),
                 a * cosh(u[0]) * sin(u[1]), u[2]);
      break;
    case ChartKind::prolate_spheroidal:
      fill_axial(a * cosh(u[0]) * sin(u[1]), a * sinh(u[0]) * cos(u[1]),
                 a * sinh(u[0]) * cos(u[1]), -a * cosh(u[0]) * sin(u[1]),
                 a * sinh(u[0]) * sin(u[1]), u[2]);
      break;
    case ChartKind::cylindrical: {
      T c = cos(u[1]);
      T s = sin(u[1]);
      J[0] = {c, -u[0] * s, T(0.0)};
      J[1] = {s, u[0] * c, T(0.0)};
      J[2] = {T(0.0), T(0.0), T(1.0)};
      break;
    }
    case ChartKind::spherical: {
      T st = sin(u[1]);
      T ct = cos(u[1]);
      T sp = sin(u[2]);
      T cp = cos(u[2]);
      J[0] = {st * cp, u[0] * ct * cp, -u[0] * st * sp};
      J[1] = {st * sp, u[0] * ct * sp, u[0] * st * cp};
      J[2] = {ct, -u[0] * st, T(0.0)};
      break;
    }
  }
  return J;
}

// Inverse map for the three non-subgroup charts. Smooth away from the
// z-axis (all kinds), the focal disk (oblate) and the focal segment (prolate).
template <class T>
Vec3<T> inverse(ChartKind kind, const Vec3<T>& x, double a) {
  using std::atan2;
  using std::log;
  using std::sqrt;
  T r2 = x[0] * x[0] + x[1] * x[1];
  T rho = sqrt(r2);
  T phi = atan2(x[1], x[0]);
  if (value(phi) < 0.0) phi = phi + 2.0 * std::numbers::pi;
  const T& z = x[2];
  switch (kind) {
    case ChartKind::circular_parabolic: {
      T R = sqrt(r2 + z * z);
      return {sqrt(R + z), sqrt(R - z), phi};
    }
    case ChartKind::oblate_spheroidal: {
      T d1 = sqrt((rho + a) * (rho + a) + z * z);
      T d2 = sqrt((rho - a) * (rho - a) + z * z);
      T ch = (d1 + d2) / (2.0 * a);
      T sh = sqrt(ch * ch - 1.0);
      T xi = log(ch + sh);
      // sin(eta) = (d1 - d2)/(2a), cos(eta) = z/(a sinh xi)
      T eta = atan2((d1 - d2) * sh, 2.0 * z);
      return {xi, eta, phi};
    }
    case ChartKind::prolate_spheroidal: {
      T d1 = sqrt(r2 + (z + a) * (z + a));
      T d2 = sqrt(r2 + (z - a) * (z - a));
      T ch = (d1 + d2) / (2.0 * a);
      T sh = sqrt(ch * ch - 1.0);
      T xi = log(ch + sh);
      // cos(eta) = (d1 - d2)/(2a), sin(eta) = rho/(a sinh xi)
      T eta = atan2(2.0 * rho, (d1 - d2) * sh);
      return {xi, eta, phi};
    }
    case ChartKind::cylindrical:
      return {rho, phi, z};
    case ChartKind::spherical: {
      T R = sqrt(r2 + z * z);
      return {R, atan2(rho, z), phi};
    }
  }
  return {};
}

}  // namespace chart

}  // namespace supermag

#endif  // SUPERMAG_COORDS_HPP
