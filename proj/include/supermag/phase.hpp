#ifndef SUPERMAG_PHASE_HPP
#define SUPERMAG_PHASE_HPP

#include <array>
#include <cmath>

#include "supermag/dual.hpp"
#include "supermag/errors.hpp"

namespace supermag {

template <class T>
using Vec3 = std::array<T, 3>;

// Cartesian position and canonical momenta (mass 1, charge -1).
template <class T>
struct Phase {
  Vec3<T> q{};
  Vec3<T> p{};
};

using PhasePoint = Phase<double>;
using Grad6 = std::array<double, 6>;
using State6 = std::array<double, 6>;

inline PhasePoint make_phase_point(const Vec3<double>& q, const Vec3<double>& p) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(q[i])) throw EvaluationError("non-finite position component", i);
    if (!std::isfinite(p[i])) throw EvaluationError("non-finite momentum component", 3 + i);
  }
  return {q, p};
}

inline State6 to_state(const PhasePoint& s) {
  return {s.q[0], s.q[1], s.q[2], s.p[0], s.p[1], s.p[2]};
}
inline PhasePoint from_state(const State6& x) {
  return {{x[0], x[1], x[2]}, {x[3], x[4], x[5]}};
}

template <class T> Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
template <class T> Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
template <class T> T dot(const Vec3<T>& a, const Vec3<T>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
template <class T> Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Quantities built from covariant momenta p^A = p + A(q). Every catalog
// integral is written in terms of these.
template <class T>
struct Covariant {
  Vec3<T> q;
  Vec3<T> pa;  // p^A
  Vec3<T> L;   // L^A = q x p^A
  T r2;        // x^2 + y^2
  T R2;        // x^2 + y^2 + z^2

  T L2() const { return dot(L, L); }
  // L^A_x p^A_y - L^A_y p^A_x, the leading part of the circular parabolic X1.
  T runge_lenz_z() const { return L[0] * pa[1] - L[1] * pa[0]; }
};

template <class T>
Covariant<T> covariant(const Phase<T>& s, const Vec3<T>& A) {
  Covariant<T> c;
  c.q = s.q;
  c.pa = s.p + A;
  c.L = cross(s.q, c.pa);
  c.r2 = s.q[0] * s.q[0] + s.q[1] * s.q[1];
  c.R2 = c.r2 + s.q[2] * s.q[2];
  return c;
}

}  // namespace supermag

#endif  // SUPERMAG_PHASE_HPP
