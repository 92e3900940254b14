#include "supermag/systems.hpp"

#include <algorithm>
#include <cmath>

namespace supermag {

namespace {

template <class V> using elem_t = typename std::decay_t<V>::value_type;

template <class T>
Vec3<T> axial(const Vec3<T>& q, const T& h) {
  return {-h * q[1], h * q[0], T(0.0)};
}

template <class T> T radius2(const Vec3<T>& q) { return q[0] * q[0] + q[1] * q[1]; }
template <class T> T sphere2(const Vec3<T>& q) { return q[0] * q[0] + q[1] * q[1] + q[2] * q[2]; }

// Shared assembly: W, A, B, H = (p + A)^2 / 2 + W from a system struct.
template <class Sys>
SystemSpec assemble(const Sys& sys, std::string id, std::string tag, const SystemParams& params, int rank) {
  SystemSpec spec;
  spec.id = std::move(id);
  spec.equation_tag = std::move(tag);
  spec.params = params;
  spec.claimed_rank = rank;
  spec.W = ScalarField([sys](const auto& q) { return sys.W(q); });
  spec.A = CovectorField{VectorField([sys](const auto& q) { return sys.A(q); })};
  spec.B = TwoForm{VectorField([sys](const auto& q) { return sys.B(q); })};
  spec.hamiltonian = Observable("H", 2, [sys](const auto& s) {
    auto pa = s.p + sys.A(s.q);
    return 0.5 * dot(pa, pa) + sys.W(s.q);
  });
  return spec;
}

enum class Leading { none, pz2, angular2, runge_lenz };

// Ansatz with a standard leading part, an L_z^A coefficient and a scalar term.
template <class LFn, class MFn>
QuadraticAnsatz make_ansatz(Leading leading, LFn lz_coefficient, MFn scalar) {
  QuadraticAnsatz a;
  auto zero = [](const auto& q) { return elem_t<decltype(q)>(0.0); };
  for (auto& f : a.f) f = ScalarField(zero);
  switch (leading) {
    case Leading::none:
      break;
    case Leading::pz2:
      a.f[2] = ScalarField([](const auto& q) { return elem_t<decltype(q)>(1.0); });
      break;
    case Leading::angular2:
      // (L^A)^2 = R^2 |p^A|^2 - (q . p^A)^2
      a.f[0] = ScalarField([](const auto& q) { return q[1] * q[1] + q[2] * q[2]; });
      a.f[1] = ScalarField([](const auto& q) { return q[0] * q[0] + q[2] * q[2]; });
      a.f[2] = ScalarField([](const auto& q) { return q[0] * q[0] + q[1] * q[1]; });
      a.f[3] = ScalarField([](const auto& q) { return -2.0 * q[0] * q[1]; });
      a.f[4] = ScalarField([](const auto& q) { return -2.0 * q[0] * q[2]; });
      a.f[5] = ScalarField([](const auto& q) { return -2.0 * q[1] * q[2]; });
      break;
    case Leading::runge_lenz:
      // L_x p_y - L_y p_x = -z(p_x^2 + p_y^2) + x p_x p_z + y p_y p_z
      a.f[0] = ScalarField([](const auto& q) { return -q[2]; });
      a.f[1] = ScalarField([](const auto& q) { return -q[2]; });
      a.f[4] = ScalarField([](const auto& q) { return q[0]; });
      a.f[5] = ScalarField([](const auto& q) { return q[1]; });
      break;
  }
  // L_z^A = x p^A_y - y p^A_x
  a.s[0] = ScalarField([lz_coefficient](const auto& q) { return -q[1] * lz_coefficient(q); });
  a.s[1] = ScalarField([lz_coefficient](const auto& q) { return q[0] * lz_coefficient(q); });
  a.s[2] = ScalarField(zero);
  a.m0 = ScalarField(scalar);
  return a;
}

// ---------------------------------------------------------------- linear

struct LinearMin {
  SystemParams p;
  template <class T> Vec3<T> A(const Vec3<T>& q) const { return axial(q, T(0.5 * p.bz)); }
  template <class T> Vec3<T> B(const Vec3<T>&) const { return {T(0.0), T(0.0), T(p.bz)}; }
  template <class T> T W(const Vec3<T>& q) const {
    T r2 = radius2(q);
    return p.u1 / r2 - p.bz * p.bz / 8.0 * r2;
  }
  template <class T> T X1(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    const T& z = s.q[2];
    return c.L2() - p.bz * c.R2 * c.L[2] + 2.0 * p.u1 * z * z / c.r2 + p.bz * p.bz / 4.0 * c.r2 * c.R2;
  }
  template <class T> T X2(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L[2] - 0.5 * p.bz * c.r2;
  }
  template <class T> T Y3(const Phase<T>& s) const { return s.p[2] + A(s.q)[2]; }
};

struct LinearMax {
  SystemParams p;
  template <class T> Vec3<T> A(const Vec3<T>& q) const { return axial(q, T(0.5 * p.bz)); }
  template <class T> Vec3<T> B(const Vec3<T>&) const { return {T(0.0), T(0.0), T(p.bz)}; }
  template <class T> T W(const Vec3<T>& q) const {
    const T& z = q[2];
    return p.u1 / (z * z) + p.bz * p.bz / 8.0 * z * z;
  }
  template <class T> T X1(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    const T& z = s.q[2];
    return c.L2() - p.bz * c.R2 * c.L[2] + 2.0 * p.u1 / (z * z) * c.r2 + p.bz * p.bz / 4.0 * c.r2 * c.R2;
  }
  template <class T> T X2(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L[2] - 0.5 * p.bz * c.r2;
  }
  template <class T> T Y3(const Phase<T>& s) const {
    auto pa = s.p + A(s.q);
    return pa[0] + p.bz * s.q[1];
  }
  template <class T> T Y4(const Phase<T>& s) const {
    auto pa = s.p + A(s.q);
    return pa[1] - p.bz * s.q[0];
  }
};

// ---------------------------------------------------------------- OPHmin

struct OpMin {
  SystemParams p;
  template <class T> T g(const Vec3<T>& q) const {
    const T& z = q[2];
    return p.bz + p.bp / (z * z) + p.bs * sphere2(q);
  }
  template <class T> Vec3<T> A(const Vec3<T>& q) const { return axial(q, 0.5 * g(q)); }
  template <class T> Vec3<T> B(const Vec3<T>& q) const {
    const T& x = q[0];
    const T& y = q[1];
    const T& z = q[2];
    T z3 = z * z * z;
    return {p.bp * x / z3 - p.bs * x * z, p.bp * y / z3 - p.bs * y * z,
            p.bz + p.bp / (z * z) + p.bs * (radius2(q) + sphere2(q))};
  }
  template <class T> T W(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    T R2 = sphere2(q);
    T z2 = z * z;
    return p.u1 / r2 + p.u2 / z2 - p.u3 * R2 - p.bp * p.bs / (4.0 * z2) * R2 * R2 -
           p.bz * p.bp / (4.0 * z2) * r2 - p.bz * p.bs / 4.0 * r2 * R2 -
           p.bs * p.bs / 8.0 * r2 * R2 * R2 + p.bz * p.bz / 8.0 * z2 - p.bp * p.bp / (8.0 * z2 * z2) * r2;
  }
  template <class T> T X1_lz(const Vec3<T>& q) const {
    T R2 = sphere2(q);
    return -(p.bz + p.bs * R2) * R2;
  }
  template <class T> T X1_scalar(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    T R2 = sphere2(q);
    T z2 = z * z;
    return 2.0 * p.u1 / r2 * z2 + 2.0 * p.u2 / z2 * r2 + p.bz * p.bz / 4.0 * r2 * R2 +
           p.bz * p.bs / 2.0 * r2 * R2 * R2 - p.bp * p.bp / (4.0 * z2 * z2) * r2 * R2 +
           p.bs * p.bs / 4.0 * r2 * R2 * R2 * R2;
  }
  template <class T> T X2_scalar(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    return -p.bz / 2.0 * r2 - p.bp / (2.0 * z * z) * r2 - p.bs / 2.0 * r2 * sphere2(q);
  }
  template <class T> T Y3_lz(const Vec3<T>& q) const {
    const T& z = q[2];
    return p.bp / (z * z) + p.bs * z * z;
  }
  template <class T> T Y3_scalar(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    T R2 = sphere2(q);
    T z2 = z * z;
    return 2.0 * p.u2 / z2 - 2.0 * p.u3 * z2 + p.bz * p.bz / 4.0 * z2 - p.bz * p.bp / (2.0 * z2) * r2 -
           p.bz * p.bs / 2.0 * z2 * r2 - p.bp * p.bp / (2.0 * z2 * z2) * r2 -
           p.bp * p.bs / (2.0 * z2) * R2 * R2 - p.bs * p.bs / 2.0 * z2 * r2 * R2;
  }
  template <class T> T X1(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L2() + X1_lz(s.q) * c.L[2] + X1_scalar(s.q);
  }
  template <class T> T X2(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L[2] + X2_scalar(s.q);
  }
  template <class T> T Y3(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.pa[2] * c.pa[2] + Y3_lz(s.q) * c.L[2] + Y3_scalar(s.q);
  }

  std::vector<LD> closure_terms(LD H, LD X1, LD X2, LD Y3) const {
    const LD bz = p.bz, bp = p.bp, bs = p.bs, u1 = p.u1, u2 = p.u2, u3 = p.u3;
    const LD X2s = X2 * X2;
    const LD X2q = X2s * X2s;
    return {
        32.0 * H * X1 * Y3,
        -32.0 * H * X2s * Y3,
        -16.0 * X1 * Y3 * Y3,
        16.0 * X2 *
            (-bs * X2q + 2.0 * bs * X1 * X2s + bz * X2s * Y3 - 4.0 * bp * H * H + 2.0 * bp * H * Y3 -
             bs * X1 * X1 - bz * X1 * Y3),
        -128.0 * u2 * H * H,
        64.0 * bp * bz * H * X2s,
        128.0 * u2 * H * Y3,
        4.0 * (2.0 * bp * bs - bz * bz + 8.0 * u3) * X1 * X1,
        8.0 * (bz * bz + 2.0 * bp * bs - 8.0 * u3) * X1 * X2s,
        4.0 * (10.0 * bp * bs + 8.0 * u3 - bz * bz) * X2q,
        -16.0 * bp * bz * X2s * Y3,
        -32.0 * (u1 + u2) * Y3 * Y3,
        8.0 *
            (16.0 * bz * u2 * H + bp * (bz * bz - 2.0 * bp * bs - 8.0 * u3) * X1 +
             (16.0 * bs * u2 - bz * bz * bp - 4.0 * bp * bp * bs - 8.0 * bp * u3) * X2s - 8.0 * bz * u2 * Y3) *
            X2,
        4.0 *
            (2.0 * bp * bp * bp * bs - bz * bz * bp * bp + 8.0 * bp * bp * u3 + 32.0 * bp * bs * u1 -
             16.0 * bp * bs * u2 - 64.0 * u2 * u3) *
            X2s,
        32.0 * u1 * (bz * bz * bp - 2.0 * bp * bp * bs - 8.0 * bp * u3 + 8.0 * bs * u2) * X2,
        64.0 * u1 * u2 * (bz * bz - 2.0 * bp * bs - 8.0 * u3),
    };
  }
};

// ---------------------------------------------------------------- CPHmin

struct CpMin {
  SystemParams p;  // bq may be zero (the b_q = b_l = 0 branch)
  template <class T> T h(const Vec3<T>& q) const {
    return p.bz / 2.0 + p.bq / 4.0 * (radius2(q) + 4.0 * q[2] * q[2]);
  }
  template <class T> Vec3<T> A(const Vec3<T>& q) const { return axial(q, h(q)); }
  template <class T> Vec3<T> B(const Vec3<T>& q) const {
    const T& x = q[0];
    const T& y = q[1];
    const T& z = q[2];
    return {-2.0 * p.bq * x * z, -2.0 * p.bq * y * z, p.bz + p.bq * (radius2(q) + 2.0 * z * z)};
  }
  template <class T> T W(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    T inner = 2.0 * p.bz + p.bq * (r2 + 4.0 * z * z);
    return -r2 / 32.0 * inner * inner + p.u1 * z + p.u2 / r2 + p.u3 * (r2 + 4.0 * z * z);
  }
  template <class T> T X1_lz(const Vec3<T>& q) const {
    const T& z = q[2];
    return (p.bz + p.bq * (radius2(q) + 2.0 * z * z)) * z;
  }
  template <class T> T X1_scalar(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    T z2 = z * z;
    return -p.bz * p.bz / 4.0 * z * r2 - p.bz * p.bq / 2.0 * z * r2 * (r2 + 2.0 * z2) -
           p.bq * p.bq / 16.0 * z * r2 * (3.0 * r2 + 4.0 * z2) * (r2 + 4.0 * z2) + p.u1 / 2.0 * r2 -
           2.0 * p.u2 * z / r2 + 2.0 * p.u3 * z * r2;
  }
  template <class T> T X2_scalar(const Vec3<T>& q) const { return -h(q) * radius2(q); }
  template <class T> T Y3_lz(const Vec3<T>& q) const { return 2.0 * p.bq * q[2] * q[2]; }
  template <class T> T Y3_scalar(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    return -(p.bz * p.bq + p.bq * p.bq / 2.0 * (r2 + 4.0 * z * z)) * z * z * r2 + 2.0 * p.u1 * z +
           8.0 * p.u3 * z * z;
  }
  template <class T> T X1(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.runge_lenz_z() + X1_lz(s.q) * c.L[2] + X1_scalar(s.q);
  }
  template <class T> T X2(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L[2] + X2_scalar(s.q);
  }
  template <class T> T Y3(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.pa[2] * c.pa[2] + Y3_lz(s.q) * c.L[2] + Y3_scalar(s.q);
  }

  // Printed with left-hand side ({Y3, X1})^2, but the right-hand side is
  // negative wherever it is evaluated; it equals -({Y3, X1})^2.
  std::vector<LD> closure_terms(LD H, LD X1, LD X2, LD Y3) const {
    const LD bz = p.bz, bq = p.bq, u1 = p.u1, u2 = p.u2, u3 = p.u3;
    const LD X2s = X2 * X2;
    return {
        -16.0 * H * H * Y3,
        16.0 * H * Y3 * Y3,
        -4.0 * Y3 * Y3 * Y3,
        8.0 * (bq * X2s * Y3 + 2.0 * bz * H * Y3 + bq * X1 * X1 - bz * Y3 * Y3) * X2,
        -16.0 * u1 * H * X1,
        32.0 * u3 * X1 * X1,
        8.0 * u1 * X1 * Y3,
        4.0 * (8.0 * u3 - bz * bz) * X2s * Y3,
        8.0 * (bz * u1 * X1 + 2.0 * bq * u2 * Y3) * X2,
        4.0 * u1 * u1 * X2s,
        64.0 * u2 * u3 * Y3,
        8.0 * u1 * u1 * u2,
    };
  }
};

// b_q = 0, b_l != 0 branch after the z-shift absorbing b_z.
struct CpBl {
  SystemParams p;
  template <class T> Vec3<T> A(const Vec3<T>& q) const {
    return {p.bl * q[1] * q[2], -p.bl * q[0] * q[2], T(0.0)};
  }
  template <class T> Vec3<T> B(const Vec3<T>& q) const {
    return {p.bl * q[0], p.bl * q[1], -2.0 * p.bl * q[2]};
  }
  template <class T> T W(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    return -p.bl * p.bl / 2.0 * z * z * r2 + p.u1 * z + p.u2 / r2 + p.u3 * (r2 + 4.0 * z * z);
  }
  template <class T> T X1_lz(const Vec3<T>& q) const {
    return -p.bl / 2.0 * (radius2(q) + 4.0 * q[2] * q[2]);
  }
  template <class T> T X1_scalar(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    return p.u1 / 2.0 * r2 - 2.0 * p.u2 * z / r2 + 2.0 * p.u3 * z * r2 -
           p.bl * p.bl / 2.0 * z * r2 * (r2 + 2.0 * z * z);
  }
  template <class T> T X2_scalar(const Vec3<T>& q) const { return p.bl * q[2] * radius2(q); }
  template <class T> T Y3_lz(const Vec3<T>& q) const { return -2.0 * p.bl * q[2]; }
  template <class T> T Y3_scalar(const Vec3<T>& q) const {
    const T& z = q[2];
    return 2.0 * p.u1 * z + 8.0 * p.u3 * z * z - 2.0 * p.bl * p.bl * z * z * radius2(q);
  }
  template <class T> T X1(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.runge_lenz_z() + X1_lz(s.q) * c.L[2] + X1_scalar(s.q);
  }
  template <class T> T X2(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L[2] + X2_scalar(s.q);
  }
  template <class T> T Y3(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.pa[2] * c.pa[2] + Y3_lz(s.q) * c.L[2] + Y3_scalar(s.q);
  }
};

// Untranslated general circular parabolic system; its integrals are those of
// the normalized branch evaluated at the shifted height z - shift.
template <class Inner>
struct CpGeneral {
  SystemParams p;
  Inner inner;
  double shift = 0.0;
  template <class T> T h(const Vec3<T>& q) const {
    const T& z = q[2];
    return p.bz / 2.0 - p.bl * z + p.bq / 4.0 * (radius2(q) + 4.0 * z * z);
  }
  template <class T> Vec3<T> A(const Vec3<T>& q) const { return axial(q, h(q)); }
  template <class T> Vec3<T> B(const Vec3<T>& q) const {
    const T& x = q[0];
    const T& y = q[1];
    const T& z = q[2];
    return {p.bl * x - 2.0 * x * z * p.bq, p.bl * y - 2.0 * p.bq * y * z,
            p.bz - 2.0 * p.bl * z + p.bq * (radius2(q) + 2.0 * z * z)};
  }
  template <class T> T W(const Vec3<T>& q) const {
    const T& z = q[2];
    T r2 = radius2(q);
    T inner_sq = 2.0 * p.bz - 4.0 * p.bl * z + p.bq * (r2 + 4.0 * z * z);
    return -r2 / 32.0 * inner_sq * inner_sq + p.u1 * z + p.u2 / r2 + p.u3 * (r2 + 4.0 * z * z);
  }
  template <class T> Phase<T> shifted(const Phase<T>& s) const {
    Phase<T> t = s;
    t.q[2] = t.q[2] - shift;
    return t;
  }
  template <class T> T X1(const Phase<T>& s) const { return inner.X1(shifted(s)); }
  template <class T> T X2(const Phase<T>& s) const { return inner.X2(shifted(s)); }
  template <class T> T Y3(const Phase<T>& s) const { return inner.Y3(shifted(s)); }
};

// ---------------------------------------------------------------- maximal

struct Max5 {
  SystemParams p;
  double ratio2() const { return static_cast<double>(p.n * p.n) / static_cast<double>(p.m * p.m); }
  template <class T> Vec3<T> A(const Vec3<T>& q) const { return axial(q, T(0.5 * p.bz)); }
  template <class T> Vec3<T> B(const Vec3<T>&) const { return {T(0.0), T(0.0), T(p.bz)}; }
  template <class T> T W(const Vec3<T>& q) const {
    const T& z = q[2];
    return p.u2 / (z * z) - p.bz * p.bz / 8.0 * radius2(q) + ratio2() * p.bz * p.bz / 32.0 * sphere2(q);
  }
  template <class T> T X1(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    const T& z = s.q[2];
    return c.L2() - p.bz * c.R2 * c.L[2] + 2.0 * p.u2 / (z * z) * c.r2 + p.bz * p.bz / 4.0 * c.r2 * c.R2;
  }
  template <class T> T X2(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L[2] - 0.5 * p.bz * c.r2;
  }
  template <class T> T Y3(const Phase<T>& s) const {
    T pz = s.p[2] + A(s.q)[2];
    const T& z = s.q[2];
    return pz * pz + 2.0 * p.u2 / (z * z) + ratio2() * p.bz * p.bz / 16.0 * z * z;
  }
  template <class T> Complex<T> F(const Phase<T>& s) const {
    const double n = p.n, m = p.m, bz = p.bz;
    T pz = s.p[2] + A(s.q)[2];
    const T& z = s.q[2];
    T z2 = z * z;
    T re = (bz * bz * n * n * z2 * z2 - 16.0 * m * m * z2 * pz * pz - 32.0 * m * m * p.u2) / (n * bz * z2);
    T im = 8.0 * m * z * pz;
    return {re, im};
  }
  template <class T> Complex<T> G(const Phase<T>& s) const {
    const double n = p.n, m = p.m, bz = p.bz;
    auto pa = s.p + A(s.q);
    const T& x = s.q[0];
    const T& y = s.q[1];
    Complex<T> y_ix{y, -x};
    Complex<T> x_iy{x, y};
    Complex<T> py_ipx{pa[1], -pa[0]};
    Complex<T> px_ipy{pa[0], pa[1]};
    return 4.0 * bz * bz * (y_ix * y_ix) + 16.0 * bz * (x_iy * py_ipx) + 16.0 * (px_ipy * px_ipy) +
           (n * n * bz * bz / (m * m)) * (x_iy * x_iy);
  }
  template <class T> T Y4(const Phase<T>& s, double fs, double gs) const {
    Complex<T> f = F(s) / fs;
    Complex<T> g = G(s) / gs;
    return (ipow(f, 2 * p.m) * ipow(g, p.n)).re;
  }
  // Explicit form printed for m = n = 1 (defined up to a constant factor).
  template <class T> T Y4_unit(const Phase<T>& s) const {
    const double bz = p.bz, u2 = p.u2;
    auto pa = s.p + A(s.q);
    const T& X = pa[0];
    const T& Y = pa[1];
    const T& Z = pa[2];
    const T& x = s.q[0];
    const T& y = s.q[1];
    const T& z = s.q[2];
    T z2 = z * z;
    T z3 = z2 * z;
    T z4 = z2 * z2;
    T Z2 = Z * Z;
    T Z3 = Z2 * Z;
    T Z4 = Z2 * Z2;
    T XmY = X * X - Y * Y;
    T w = bz * bz * z4 - 32.0 * u2;       // b_z^2 z^4 - 32 u2
    T w3 = 3.0 * bz * bz * z4 - 32.0 * u2;  // 3 b_z^2 z^4 - 32 u2
    T xy2 = x * x - y * y;
    T yXxY = y * X + x * Y;
    T result = XmY * Z4;
    result = result + bz * Z3 * (2.0 * z * X * Y + y * X * Z + x * Y * Z);
    result = result - 3.0 * Z2 / (16.0 * z2) *
                          (2.0 * bz * bz * z4 * XmY + 16.0 * bz * bz / 3.0 * z3 * (x * X - y * Y) * Z +
                           bz * bz * xy2 * z2 * Z2 - 64.0 * u2 / 3.0 * XmY);
    result = result - 3.0 * bz * Z / (8.0 * z2) *
                          (bz * bz * x * y * z3 * Z2 + w3 / 3.0 * yXxY * Z + w / 3.0 * z * X * Y);
    result = result + w * w / (256.0 * z4) * X * X;
    result = result + bz * bz * w / (16.0 * z) * x * X * Z;
    result = result - w * w / (256.0 * z4) * Y * Y;
    result = result - bz * bz * w / (16.0 * z) * y * Y * Z;
    result = result + 3.0 * bz * bz / (128.0 * z2) * w3 * xy2 * Z2;
    result = result + 3.0 * bz / (128.0 * z4) * w *
                          (bz * bz / 6.0 * z4 * yXxY + bz * bz * x * y * z3 * Z - 16.0 * u2 / 3.0 * yXxY);
    result = result - 3.0 * bz * bz / (4096.0 * z4) * w * w * xy2;
    return result;
  }
};

struct Max6 {
  SystemParams p;
  double ratio2() const { return static_cast<double>(p.n * p.n) / static_cast<double>(p.m * p.m); }
  template <class T> Vec3<T> A(const Vec3<T>& q) const { return axial(q, T(0.5 * p.bz)); }
  template <class T> Vec3<T> B(const Vec3<T>&) const { return {T(0.0), T(0.0), T(p.bz)}; }
  template <class T> T W(const Vec3<T>& q) const {
    const T& z = q[2];
    return p.bz * p.bz / 8.0 * (ratio2() - 1.0) * radius2(q) + ratio2() * p.bz * p.bz / 2.0 * z * z;
  }
  template <class T> T X1(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    const T& z = s.q[2];
    return c.runge_lenz_z() + p.bz * z * c.L[2] + p.bz * p.bz / 4.0 * (ratio2() - 1.0) * z * c.r2;
  }
  template <class T> T X2(const Phase<T>& s) const {
    auto c = covariant(s, A(s.q));
    return c.L[2] - 0.5 * p.bz * c.r2;
  }
  template <class T> T Y3(const Phase<T>& s) const {
    T pz = s.p[2] + A(s.q)[2];
    const T& z = s.q[2];
    return pz * pz + ratio2() * p.bz * p.bz * z * z;
  }
  template <class T> Complex<T> F(const Phase<T>& s) const {
    const double n = p.n, m = p.m, bz = p.bz;
    auto pa = s.p + A(s.q);
    const T& x = s.q[0];
    const T& y = s.q[1];
    Complex<T> y_ix{y, x};
    Complex<T> x_miy{x, -y};
    Complex<T> py_ipx{pa[1], pa[0]};
    return ((n * n - m * m) * bz * bz) * (y_ix * y_ix) - (4.0 * m * m * bz) * (x_miy * py_ipx) +
           (4.0 * m * m) * (py_ipx * py_ipx);
  }
  template <class T> Complex<T> G(const Phase<T>& s) const {
    T pz = s.p[2] + A(s.q)[2];
    return {p.m * pz, p.n * p.bz * s.q[2]};
  }
  template <class T> T Y4(const Phase<T>& s, double fs, double gs) const {
    Complex<T> f = F(s) / fs;
    Complex<T> g = G(s) / gs;
    return (ipow(f, p.n) * ipow(g, p.m)).re;
  }
  template <class T> T Y4_unit(const Phase<T>& s) const {
    const double bz = p.bz;
    auto pa = s.p + A(s.q);
    const T& X = pa[0];
    const T& Y = pa[1];
    const T& Z = pa[2];
    const T& x = s.q[0];
    const T& y = s.q[1];
    const T& z = s.q[2];
    return Z * (X * X - Y * Y + bz * (x * Y + y * X)) + 2.0 * bz * z * X * Y - bz * bz * z * (x * X - y * Y);
  }
};

struct Free {
  template <class T> Vec3<T> A(const Vec3<T>&) const { return {T(0.0), T(0.0), T(0.0)}; }
  template <class T> Vec3<T> B(const Vec3<T>&) const { return {T(0.0), T(0.0), T(0.0)}; }
  template <class T> T W(const Vec3<T>&) const { return T(0.0); }
};

template <class Sys>
void add_standard_integrals(SystemSpec& spec, const Sys& sys) {
  spec.integrals.emplace_back("X1", 2, [sys](const auto& s) { return sys.X1(s); });
  spec.integrals.emplace_back("X2", 1, [sys](const auto& s) { return sys.X2(s); });
}

template <class Sys>
void add_decompositions(SystemSpec& spec, const Sys& sys, Leading x1_leading) {
  spec.decompositions["X1"] = make_ansatz(
      x1_leading, [sys](const auto& q) { return sys.X1_lz(q); }, [sys](const auto& q) { return sys.X1_scalar(q); });
  spec.decompositions["X2"] = make_ansatz(
      Leading::none, [](const auto& q) { return elem_t<decltype(q)>(1.0); },
      [sys](const auto& q) { return sys.X2_scalar(q); });
  spec.decompositions["Y3"] = make_ansatz(
      Leading::pz2, [sys](const auto& q) { return sys.Y3_lz(q); }, [sys](const auto& q) { return sys.Y3_scalar(q); });
}

template <class Sys>
ComplexIntegral make_complex_integral(const Sys& sys, int f_power, int g_power) {
  ComplexIntegral ci;
  ci.factor_f_power = f_power;
  ci.factor_g_power = g_power;
  ci.factor_moduli = [sys](const PhasePoint& s) {
    return std::array<double, 2>{std::sqrt(norm2(sys.F(s))), std::sqrt(norm2(sys.G(s)))};
  };
  ci.scaled = [sys](double fs, double gs) {
    return Observable("Y4", -1, [sys, fs, gs](const auto& s) { return sys.Y4(s, fs, gs); });
  };
  if (sys.p.n == 1 && sys.p.m == 1) {
    ci.explicit_unit_form = Observable("Y4_explicit", -1, [sys](const auto& s) { return sys.Y4_unit(s); });
  }
  return ci;
}

void require_nonzero_field(bool all_zero, const std::string& id) {
  if (all_zero) {
    throw DomainError(id + ": all magnetic field strengths vanish; field-free systems are excluded");
  }
}

}  // namespace

const Observable& SystemSpec::integral(std::string_view label) const {
  for (const auto& g : integrals) {
    if (g.label() == label) return g;
  }
  throw ConfigError(std::string(label), "system " + id + " has no such integral");
}

bool SystemSpec::has_integral(std::string_view label) const {
  return std::any_of(integrals.begin(), integrals.end(), [label](const Observable& g) { return g.label() == label; });
}

SystemSpec SystemSpec::with_y4_normalized_at(const PhasePoint& s0) const {
  SystemSpec out = *this;
  if (!y4) return out;
  auto mod = y4->factor_moduli(s0);
  for (double& v : mod) {
    if (!(v > 0.0) || !std::isfinite(v)) v = 1.0;
  }
  for (auto& g : out.integrals) {
    if (g.label() == "Y4") g = y4->scaled(mod[0], mod[1]);
  }
  return out;
}

nlohmann::json SystemSpec::to_json() const {
  nlohmann::json j{{"id", id}, {"claimed_rank", claimed_rank}, {"serializable", serializable}};
  if (serializable) {
    j["params"] = params.to_json();
  } else {
    j["params"] = nullptr;
    j["note"] = "runtime-supplied arbitrary functions are not serializable";
  }
  return j;
}

Observable ansatz_observable(const std::string& label, const QuadraticAnsatz& an, const CovectorField& A) {
  return Observable(label, 2, [an, A](const auto& s) {
    auto pa = s.p + A(s.q);
    const auto& q = s.q;
    auto result = an.f[0](q) * pa[0] * pa[0] + an.f[1](q) * pa[1] * pa[1] + an.f[2](q) * pa[2] * pa[2] +
                  an.f[3](q) * pa[0] * pa[1] + an.f[4](q) * pa[0] * pa[2] + an.f[5](q) * pa[1] * pa[2];
    result = result + an.s[0](q) * pa[0] + an.s[1](q) * pa[1] + an.s[2](q) * pa[2] + an.m0(q);
    return result;
  });
}

CovectorField symmetric_constant_potential(double bz) {
  return CovectorField{VectorField([bz](const auto& q) {
    using T = elem_t<decltype(q)>;
    return axial(q, T(0.5 * bz));
  })};
}

SystemSpec build_free_particle() {
  SystemSpec spec = assemble(Free{}, "free", "free particle", SystemParams{}, 3);
  spec.integrals.emplace_back("Lz", 1, [](const auto& s) { return s.q[0] * s.p[1] - s.q[1] * s.p[0]; });
  spec.integrals.emplace_back("Pz", 1, [](const auto& s) { return s.p[2]; });
  return spec;
}

SystemSpec build_linear_min(const SystemParams& p) {
  require_nonzero_field(p.bz == 0.0, "linear_min");
  LinearMin sys{p};
  SystemSpec spec = assemble(sys, "linear_min", "Sec43", p, 4);
  spec.singular_r = p.u1 != 0.0;
  add_standard_integrals(spec, sys);
  spec.integrals.emplace_back("Y3", 1, [sys](const auto& s) { return sys.Y3(s); });
  spec.involutions = {{"X1", "X2"}, {"X2", "Y3"}};
  return spec;
}

SystemSpec build_linear_max(const SystemParams& p) {
  require_nonzero_field(p.bz == 0.0, "linear_max");
  LinearMax sys{p};
  SystemSpec spec = assemble(sys, "linear_max", "Sec43, r^2 -> z^2", p, 5);
  spec.singular_z = p.u1 != 0.0;
  add_standard_integrals(spec, sys);
  spec.integrals.emplace_back("Y3", 1, [sys](const auto& s) { return sys.Y3(s); });
  spec.integrals.emplace_back("Y4", 1, [sys](const auto& s) { return sys.Y4(s); });
  spec.involutions = {{"X1", "X2"}};
  return spec;
}

SystemSpec build_op_min(const SystemParams& p) {
  require_nonzero_field(p.bz == 0.0 && p.bp == 0.0 && p.bs == 0.0, "op_min");
  OpMin sys{p};
  SystemSpec spec = assemble(sys, "op_min", "OPHmin", p, 4);
  spec.singular_r = true;
  spec.singular_z = true;
  add_standard_integrals(spec, sys);
  spec.integrals.emplace_back("Y3", 2, [sys](const auto& s) { return sys.Y3(s); });
  spec.involutions = {{"X1", "X2"}, {"X2", "Y3"}};
  add_decompositions(spec, sys, Leading::angular2);
  spec.closure = ClosurePolynomial{"X1", "Y3", 1.0, [sys](LD H, LD X1, LD X2, LD Y3) {
                                     return sys.closure_terms(H, X1, X2, Y3);
                                   }};
  return spec;
}

SystemSpec build_cp_min(const SystemParams& p) {
  require_nonzero_field(p.bz == 0.0 && p.bq == 0.0, "cp_min");
  CpMin sys{p};
  sys.p.bl = 0.0;
  SystemSpec spec = assemble(sys, "cp_min", "CPHmin", sys.p, 4);
  spec.singular_r = true;
  add_standard_integrals(spec, sys);
  spec.integrals.emplace_back("Y3", 2, [sys](const auto& s) { return sys.Y3(s); });
  spec.involutions = {{"X1", "X2"}, {"X2", "Y3"}};
  add_decompositions(spec, sys, Leading::runge_lenz);
  spec.closure = ClosurePolynomial{"Y3", "X1", -1.0, [sys](LD H, LD X1, LD X2, LD Y3) {
                                     return sys.closure_terms(H, X1, X2, Y3);
                                   }};
  return spec;
}

SystemSpec build_cp_bl(const SystemParams& p) {
  require_nonzero_field(p.bl == 0.0, "cp_bl");
  CpBl sys{p};
  sys.p.bq = 0.0;
  sys.p.bz = 0.0;
  SystemSpec spec = assemble(sys, "cp_bl", "Hgen, b_q = 0", sys.p, 4);
  spec.singular_r = true;
  add_standard_integrals(spec, sys);
  spec.integrals.emplace_back("Y3", 2, [sys](const auto& s) { return sys.Y3(s); });
  spec.involutions = {{"X1", "X2"}, {"X2", "Y3"}};
  add_decompositions(spec, sys, Leading::runge_lenz);
  return spec;
}

SystemSpec build_cp_general(const SystemParams& p) {
  require_nonzero_field(p.bz == 0.0 && p.bl == 0.0 && p.bq == 0.0, "cp_general");
  SystemSpec spec;
  auto finish = [&spec, &p](const auto& sys) {
    spec = assemble(sys, "cp_general", "Hgen", p, 4);
    spec.singular_r = true;
    add_standard_integrals(spec, sys);
    spec.integrals.emplace_back("Y3", 2, [sys](const auto& s) { return sys.Y3(s); });
    spec.involutions = {{"X1", "X2"}, {"X2", "Y3"}};
  };
  if (p.bq != 0.0) {
    double shift = p.bl / (2.0 * p.bq);
    SystemParams inner = p;
    inner.bl = 0.0;
    inner.u1 = p.u1 + 8.0 * p.u3 * shift;
    inner.bz = p.bz - p.bl * p.bl / (2.0 * p.bq);
    finish(CpGeneral<CpMin>{p, CpMin{inner}, shift});
  } else if (p.bl != 0.0) {
    double shift = p.bz / (2.0 * p.bl);
    SystemParams inner = p;
    inner.bz = 0.0;
    inner.u1 = p.u1 + 8.0 * p.u3 * shift;
    finish(CpGeneral<CpBl>{p, CpBl{inner}, shift});
  } else {
    finish(CpGeneral<CpMin>{p, CpMin{p}, 0.0});
  }
  return spec;
}

SystemSpec build_max5(const SystemParams& p) {
  require_nonzero_field(p.bz == 0.0, "max5");
  SystemParams q = p;
  q.normalize_resonance();
  // Resonance: u3 = (bz^2/8)(1 - n^2/(4 m^2)), u1 = bs = bp = 0.
  q.u1 = 0.0;
  q.bp = 0.0;
  q.bs = 0.0;
  q.u3 = q.bz * q.bz / 8.0 * (1.0 - static_cast<double>(q.n * q.n) / (4.0 * q.m * q.m));
  Max5 sys{q};
  SystemSpec spec = assemble(sys, "max5", "MaxHam5", q, 5);
  spec.singular_z = true;
  add_standard_integrals(spec, sys);
  spec.integrals.emplace_back("Y3", 2, [sys](const auto& s) { return sys.Y3(s); });
  spec.integrals.emplace_back("Y4", 2 * (q.n + 2 * q.m), [sys](const auto& s) { return sys.Y4(s, 1.0, 1.0); });
  spec.involutions = {{"X1", "X2"}, {"X2", "Y3"}};
  spec.y4 = make_complex_integral(sys, 2 * q.m, q.n);
  return spec;
}

SystemSpec build_max6(const SystemParams& p) {
  require_nonzero_field(p.bz == 0.0, "max6");
  SystemParams q = p;
  q.normalize_resonance();
  // Resonance: u3 = n^2 bz^2 / (8 m^2), u1 = u2 = bq = bl = 0.
  q.u1 = 0.0;
  q.u2 = 0.0;
  q.bq = 0.0;
  q.bl = 0.0;
  q.u3 = static_cast<double>(q.n * q.n) * q.bz * q.bz / (8.0 * q.m * q.m);
  Max6 sys{q};
  SystemSpec spec = assemble(sys, "max6", "MaxHam6", q, 5);
  add_standard_integrals(spec, sys);
  spec.integrals.emplace_back("Y3", 2, [sys](const auto& s) { return sys.Y3(s); });
  spec.integrals.emplace_back("Y4", 2 * q.n + q.m, [sys](const auto& s) { return sys.Y4(s, 1.0, 1.0); });
  spec.involutions = {{"X1", "X2"}, {"X2", "Y3"}};
  spec.y4 = make_complex_integral(sys, q.n, q.m);
  return spec;
}

}  // namespace supermag
