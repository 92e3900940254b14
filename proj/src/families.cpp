#include <cmath>
#include <utility>

#include "supermag/systems.hpp"

namespace supermag {

namespace {

template <class V> using elem_t = typename std::decay_t<V>::value_type;

// Chart quantities at one Cartesian point: u = (xi, eta, phi), canonical
// momenta p_u = J^T p, and the shorthands of each kind.
template <class T>
struct ChartPoint {
  Vec3<T> u;
  Vec3<T> pu;
  T c;  // CP: xi^2, oblate: cosh^2 xi, prolate: sinh^2 xi
  T s;  // CP: eta^2, spheroidal: sin^2 eta
  T D;  // CP: xi^2 + eta^2, oblate: c - s, prolate: c + s
};

template <class T>
ChartPoint<T> chart_point(const IntegrableFamily& fam, const Vec3<T>& q, const Vec3<T>& p) {
  using std::cosh;
  using std::sin;
  using std::sinh;
  ChartPoint<T> cp;
  cp.u = chart::inverse(fam.kind, q, fam.a);
  auto J = chart::jacobian(fam.kind, cp.u, fam.a);
  for (int j = 0; j < 3; ++j) cp.pu[j] = J[0][j] * p[0] + J[1][j] * p[1] + J[2][j] * p[2];
  const T& xi = cp.u[0];
  const T& eta = cp.u[1];
  switch (fam.kind) {
    case ChartKind::circular_parabolic:
      cp.c = xi * xi;
      cp.s = eta * eta;
      cp.D = cp.c + cp.s;
      break;
    case ChartKind::oblate_spheroidal:
      cp.c = cosh(xi) * cosh(xi);
      cp.s = sin(eta) * sin(eta);
      cp.D = cp.c - cp.s;
      break;
    case ChartKind::prolate_spheroidal:
      cp.c = sinh(xi) * sinh(xi);
      cp.s = sin(eta) * sin(eta);
      cp.D = cp.c + cp.s;
      break;
    default:
      throw DomainError("integrable families use the circular parabolic or spheroidal charts");
  }
  return cp;
}

// G = -A_phi, so that X2 = p_phi^A + G = p_phi.
template <class T>
T gauge_G(const IntegrableFamily& fam, const Vec3<T>& u, const T& c, const T& s, const T& D) {
  T b1 = fam.beta1(u[1]);
  T b2 = fam.beta2(u[0]);
  switch (fam.kind) {
    case ChartKind::circular_parabolic:
      return (c * b1 + s * b2) / D;
    case ChartKind::oblate_spheroidal:
      return (c * b1 - s * b2) / (2.0 * D);
    default:
      return (c * b1 + s * b2) / (2.0 * D);
  }
}

template <class T>
T gauge_G_at(const IntegrableFamily& fam, const Vec3<T>& u) {
  using std::cosh;
  using std::sin;
  using std::sinh;
  const T& xi = u[0];
  const T& eta = u[1];
  switch (fam.kind) {
    case ChartKind::circular_parabolic: {
      T c = xi * xi;
      T s = eta * eta;
      return gauge_G(fam, u, c, s, c + s);
    }
    case ChartKind::oblate_spheroidal: {
      T c = cosh(xi) * cosh(xi);
      T s = sin(eta) * sin(eta);
      return gauge_G(fam, u, c, s, c - s);
    }
    default: {
      T c = sinh(xi) * sinh(xi);
      T s = sin(eta) * sin(eta);
      return gauge_G(fam, u, c, s, c + s);
    }
  }
}

template <class T>
Vec3<T> family_A(const IntegrableFamily& fam, const Vec3<T>& q) {
  Vec3<T> u = chart::inverse(fam.kind, q, fam.a);
  T Aphi = -gauge_G_at(fam, u);
  T r2 = q[0] * q[0] + q[1] * q[1];
  // A_phi dphi with dphi = (-y dx + x dy) / r^2
  return {-Aphi * q[1] / r2, Aphi * q[0] / r2, T(0.0)};
}

// Scalar potential: the printed H minus its kinetic part.
template <class T>
T family_W(const IntegrableFamily& fam, const Vec3<T>& q) {
  Vec3<T> u = chart::inverse(fam.kind, q, fam.a);
  Vec3<T> zero{T(0.0), T(0.0), T(0.0)};
  auto cp = chart_point(fam, q, zero);
  T diff = fam.beta1(u[1]) - fam.beta2(u[0]);
  T rho1 = fam.rho1(u[1]);
  T rho2 = fam.rho2(u[0]);
  const double a = fam.a;
  switch (fam.kind) {
    case ChartKind::circular_parabolic: {
      T t = diff / cp.D;
      return 0.5 * t * t + (cp.s * rho2 - cp.c * rho1) / (cp.c * cp.s * cp.D);
    }
    case ChartKind::oblate_spheroidal: {
      T t = diff / (2.0 * a * cp.D);
      return -0.5 * t * t + (rho1 + rho2) / (2.0 * a * a * cp.D);
    }
    default: {
      T t = diff / (2.0 * a * cp.D);
      return 0.5 * t * t + (rho1 + rho2) / (2.0 * a * a * cp.D);
    }
  }
}

template <class T>
T family_H_printed(const IntegrableFamily& fam, const Phase<T>& st) {
  auto cp = chart_point(fam, st.q, st.p);
  T pphiA = cp.pu[2] - gauge_G(fam, cp.u, cp.c, cp.s, cp.D);
  T kin2 = cp.pu[0] * cp.pu[0] + cp.pu[1] * cp.pu[1];
  T kinetic;
  if (fam.kind == ChartKind::circular_parabolic) {
    kinetic = 0.5 * (kin2 / cp.D + pphiA * pphiA / (cp.c * cp.s));
  } else {
    const double a2 = fam.a * fam.a;
    kinetic = 0.5 * (kin2 / (a2 * cp.D) + pphiA * pphiA / (a2 * cp.c * cp.s));
  }
  return kinetic + family_W(fam, st.q);
}

template <class T>
T family_X1(const IntegrableFamily& fam, const Phase<T>& st) {
  auto cp = chart_point(fam, st.q, st.p);
  T pphiA = cp.pu[2] - gauge_G(fam, cp.u, cp.c, cp.s, cp.D);
  const T& pxi = cp.pu[0];
  const T& peta = cp.pu[1];
  T b1 = fam.beta1(cp.u[1]);
  T b2 = fam.beta2(cp.u[0]);
  T rho1 = fam.rho1(cp.u[1]);
  T rho2 = fam.rho2(cp.u[0]);
  const T& c = cp.c;
  const T& s = cp.s;
  const T& D = cp.D;
  switch (fam.kind) {
    case ChartKind::circular_parabolic:
      // c = xi^2, s = eta^2
      return (s * pxi * pxi - c * peta * peta) / (2.0 * D) + (s - c) / (2.0 * c * s) * pphiA * pphiA +
             (b1 - b2) / D * pphiA + (c * c * rho1 + s * s * rho2) / (c * s * D);
    case ChartKind::oblate_spheroidal:
      return (s * pxi * pxi + c * peta * peta) / D + (c + s) / (c * s) * pphiA * pphiA + (b1 - b2) / D * pphiA +
             (c * rho1 + s * rho2) / D;
    default:
      return (c * peta * peta - s * pxi * pxi) / D + (c - s) / (c * s) * pphiA * pphiA + (b2 - b1) / D * pphiA +
             (c * rho1 - s * rho2) / D;
  }
}

// The expression differentiated in the printed B_xi, B_eta. For CP and
// prolate (B_xi, B_eta) = (-d_eta P, d_xi P); oblate has the opposite signs.
template <class T>
T printed_P(const IntegrableFamily& fam, const Vec3<T>& u) {
  using std::cosh;
  using std::sin;
  using std::sinh;
  const T& xi = u[0];
  const T& eta = u[1];
  T b1 = fam.beta1(eta);
  T b2 = fam.beta2(xi);
  switch (fam.kind) {
    case ChartKind::circular_parabolic:
      return (xi * xi * b1 + eta * eta * b2) / (xi * xi + eta * eta);
    case ChartKind::oblate_spheroidal: {
      T c = cosh(xi) * cosh(xi);
      T s = sin(eta) * sin(eta);
      return (s * b2 - c * b1) / (2.0 * (c - s));
    }
    default: {
      T c = sinh(xi) * sinh(xi);
      T s = sin(eta) * sin(eta);
      return (s * b2 + c * b1) / (2.0 * (c + s));
    }
  }
}

template <class T>
Vec3<T> family_B_printed(const IntegrableFamily& fam, const Vec3<T>& q) {
  if constexpr (can_lift_v<T>) {
    using U = lift_t<T>;
    Vec3<T> u = chart::inverse(fam.kind, q, fam.a);
    Vec3<U> u_xi{U(u[0], T(1.0)), U(u[1], T(0.0)), U(u[2], T(0.0))};
    Vec3<U> u_eta{U(u[0], T(0.0)), U(u[1], T(1.0)), U(u[2], T(0.0))};
    T dP_dxi = printed_P(fam, u_xi).d;
    T dP_deta = printed_P(fam, u_eta).d;
    T B_xi;
    T B_eta;
    if (fam.kind == ChartKind::oblate_spheroidal) {
      B_xi = dP_deta;
      B_eta = -dP_dxi;
    } else {
      B_xi = -dP_deta;
      B_eta = dP_dxi;
    }
    // B = B_xi grad(eta) x grad(phi) + B_eta grad(phi) x grad(xi); the
    // chart is orthogonal so grad(u_j) = (column j of J) / |column j|^2.
    auto J = chart::jacobian(fam.kind, u, fam.a);
    std::array<Vec3<T>, 3> grad;
    for (int j = 0; j < 3; ++j) {
      T h2 = J[0][j] * J[0][j] + J[1][j] * J[1][j] + J[2][j] * J[2][j];
      grad[j] = {J[0][j] / h2, J[1][j] / h2, J[2][j] / h2};
    }
    Vec3<T> e1 = cross(grad[1], grad[2]);
    Vec3<T> e2 = cross(grad[2], grad[0]);
    return {B_xi * e1[0] + B_eta * e2[0], B_xi * e1[1] + B_eta * e2[1], B_xi * e1[2] + B_eta * e2[2]};
  } else {
    nesting_exhausted();
  }
}

std::string family_id(ChartKind kind) {
  switch (kind) {
    case ChartKind::circular_parabolic: return "family_cp";
    case ChartKind::oblate_spheroidal: return "family_oblate";
    case ChartKind::prolate_spheroidal: return "family_prolate";
    default: throw DomainError("integrable families use the circular parabolic or spheroidal charts");
  }
}

}  // namespace

UnivariateFn zero_function() {
  return UnivariateFn([](const auto& t) { return 0.0 * t; });
}

UnivariateFn polynomial_function(std::vector<double> coefficients) {
  return UnivariateFn([coefficients](const auto& t) {
    std::decay_t<decltype(t)> acc(0.0);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
    return acc;
  });
}

SystemSpec build_family(const IntegrableFamily& family) {
  if (family.kind != ChartKind::circular_parabolic && !(family.a > 0.0)) {
    throw DomainError("spheroidal families require a > 0");
  }
  IntegrableFamily fam = family;
  SystemSpec spec;
  spec.id = family_id(fam.kind);
  spec.equation_tag = fam.kind == ChartKind::circular_parabolic ? "SSecCP"
                      : fam.kind == ChartKind::oblate_spheroidal ? "SSecOS"
                                                                 : "SSecPS";
  spec.params.a = fam.a;
  spec.claimed_rank = 3;
  spec.serializable = false;
  spec.singular_r = true;
  spec.W = ScalarField([fam](const auto& q) { return family_W(fam, q); });
  spec.A = CovectorField{VectorField([fam](const auto& q) { return family_A(fam, q); })};
  spec.B = TwoForm{VectorField([fam](const auto& q) { return family_B_printed(fam, q); })};
  spec.hamiltonian = Observable("H", 2, [fam](const auto& s) {
    auto pa = s.p + family_A(fam, s.q);
    return 0.5 * dot(pa, pa) + family_W(fam, s.q);
  });
  spec.integrals.emplace_back("X1", 2, [fam](const auto& s) { return family_X1(fam, s); });
  spec.integrals.emplace_back("X2", 1, [fam](const auto& s) {
    auto cp = chart_point(fam, s.q, s.p);
    return cp.pu[2];
  });
  spec.involutions = {{"X1", "X2"}};
  return spec;
}

Observable family_printed_hamiltonian(const IntegrableFamily& family) {
  IntegrableFamily fam = family;
  return Observable("H_printed", 2, [fam](const auto& s) { return family_H_printed(fam, s); });
}

TwoForm family_printed_field(const IntegrableFamily& family) {
  IntegrableFamily fam = family;
  return TwoForm{VectorField([fam](const auto& q) { return family_B_printed(fam, q); })};
}

IntegrableFamily constant_field_family(ChartKind kind, double bz, double a) {
  IntegrableFamily fam;
  fam.kind = kind;
  fam.a = a;
  fam.rho1 = zero_function();
  fam.rho2 = zero_function();
  const double k = bz * a * a;
  switch (kind) {
    case ChartKind::circular_parabolic:
      fam.a = 1.0;
      fam.beta1 = UnivariateFn([bz](const auto& eta) { return -0.5 * bz * eta * eta * eta * eta; });
      fam.beta2 = UnivariateFn([bz](const auto& xi) { return -0.5 * bz * xi * xi * xi * xi; });
      break;
    case ChartKind::oblate_spheroidal:
      fam.beta1 = UnivariateFn([k](const auto& eta) {
        using std::sin;
        auto s = sin(eta);
        return k * s * s * s * s;
      });
      fam.beta2 = UnivariateFn([k](const auto& xi) {
        using std::cosh;
        auto c = cosh(xi);
        return k * c * c * c * c;
      });
      break;
    case ChartKind::prolate_spheroidal:
      fam.beta1 = UnivariateFn([k](const auto& eta) {
        using std::sin;
        auto s = sin(eta);
        return -k * s * s * s * s;
      });
      fam.beta2 = UnivariateFn([k](const auto& xi) {
        using std::sinh;
        auto c = sinh(xi);
        return -k * c * c * c * c;
      });
      break;
    default:
      throw DomainError("integrable families use the circular parabolic or spheroidal charts");
  }
  return fam;
}

}  // namespace supermag
