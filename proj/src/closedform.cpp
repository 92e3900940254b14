#include "supermag/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "supermag/dynamics.hpp"

namespace supermag {

namespace {

template <class T> struct Cyl {
  T r, z, theta;
};

// Continuous branch of atan(k tan h) for k > 0; equal to it on |h| < pi/2.
template <class T> T unwrapped_atan_tan(double k, const T& h) {
  using std::atan;
  using std::cos;
  using std::sin;
  T s = sin(h);
  T c = cos(h);
  return h + atan((k - 1.0) * s * c / (c * c + k * s * s));
}

double positive_radicand(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string("closed form: ") + what + " must be positive");
  return v;
}

// Radicand under the radial amplitude: L^2 + 2u1 (op_min) or L^2 + 2u2.
double radial_strength(const ClosedFormConstants& c, const SystemParams& p) {
  return c.kind == ClosedFormKind::op_min ? c.Lz * c.Lz + 2.0 * p.u1 : c.Lz * c.Lz + 2.0 * p.u2;
}

double vertical_strength(const ClosedFormConstants& c, const SystemParams& p) { return p.bp * c.Lz + 2.0 * p.u2; }

template <class T> Cyl<T> evaluate(const ClosedFormConstants& c, const SystemParams& p, const T& t) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const double nu = c.nu;
  const double C1 = radial_strength(c, p);
  const double S1 = std::sqrt(c.c1 * c.c1 + 4.0 * C1 / (nu * nu));
  T ph2 = nu * t + c.c2;
  T ph4 = nu * t + c.c4;
  Cyl<T> out;
  out.r = sqrt(c.c1 * cos(ph2) + S1);
  T angular = c.Lz / std::sqrt(C1) * unwrapped_atan_tan(c.k2, 0.5 * ph2);
  switch (c.kind) {
    case ClosedFormKind::op_min: {
      const double C3 = vertical_strength(c, p);
      const double S3 = std::sqrt(c.c3 * c.c3 + 4.0 * C3 / (nu * nu));
      out.z = static_cast<double>(c.eps) * sqrt(c.c3 * cos(ph4) + S3);
      out.theta = c.c5 + c.k1 * t + p.bs / (2.0 * nu) * (c.c1 * sin(ph2) + c.c3 * sin(ph4)) + angular +
                  p.bp / (2.0 * std::sqrt(C3)) * unwrapped_atan_tan(c.k3, 0.5 * ph4);
      break;
    }
    case ClosedFormKind::cp_min:
      out.z = c.c3 * cos(ph4) - p.u1 / (nu * nu);
      out.theta = c.c5 + c.k1 * t + angular +
                  p.bq / nu *
                      (c.c1 / 4.0 * sin(ph2) - 2.0 * c.c3 * p.u1 / (nu * nu) * sin(ph4) +
                       c.c3 * c.c3 / 2.0 * cos(ph4) * sin(ph4));
      break;
    case ClosedFormKind::cp_bl:
      out.z = c.c3 * cos(ph4) + (p.bl * c.Lz - p.u1) / (8.0 * p.u3);
      out.theta = c.c5 + c.k1 * t - c.c3 * p.bl / nu * sin(ph4) + angular;
      break;
  }
  return out;
}

// sqrt(1 + c^2 nu^2 / (4C)) - c nu / (2 sqrt C)
double k_constant(double cc, double nu, double C) {
  return std::sqrt(1.0 + cc * cc * nu * nu / (4.0 * C)) - cc * nu / (2.0 * std::sqrt(C));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

const char* to_string(ClosedFormKind kind) {
  switch (kind) {
    case ClosedFormKind::op_min:
      return "op_min";
    case ClosedFormKind::cp_min:
      return "cp_min";
    case ClosedFormKind::cp_bl:
      return "cp_bl";
  }
  return "?";
}

double frequency(ClosedFormKind kind, const SystemParams& p, double Lz) {
  double rad = 0.0;
  switch (kind) {
    case ClosedFormKind::op_min:
      rad = p.bz * p.bz - 8.0 * p.u3 + 2.0 * p.bs * (2.0 * Lz - p.bp);
      break;
    case ClosedFormKind::cp_min:
      rad = 8.0 * p.u3 + 2.0 * p.bq * Lz;
      break;
    case ClosedFormKind::cp_bl:
      rad = 8.0 * p.u3;
      break;
  }
  if (!(rad > 0.0)) throw DomainError(std::string(to_string(kind)) + ": nu^2 <= 0, motion is not bounded-periodic");
  return std::sqrt(rad);
}

ClosedFormConstants make_constants(ClosedFormKind kind, const SystemParams& p, double c1, double c2, double c3,
                                   double c4, double c5, double Lz, int eps) {
  ClosedFormConstants c;
  c.kind = kind;
  c.c1 = c1;
  c.c2 = c2;
  c.c3 = c3;
  c.c4 = c4;
  c.c5 = c5;
  c.Lz = Lz;
  c.eps = eps < 0 ? -1 : 1;
  c.nu = frequency(kind, p, Lz);
  const double nu = c.nu;
  const double C1 = positive_radicand(radial_strength(c, p), kind == ClosedFormKind::op_min ? "Lz^2 + 2u1" : "Lz^2 + 2u2");
  const double S1 = std::sqrt(c1 * c1 + 4.0 * C1 / (nu * nu));
  c.k2 = k_constant(c1, nu, C1);
  switch (kind) {
    case ClosedFormKind::op_min: {
      const double C3 = positive_radicand(vertical_strength(c, p), "Lz bp + 2u2");
      const double S3 = std::sqrt(c3 * c3 + 4.0 * C3 / (nu * nu));
      c.k1 = p.bz / 2.0 + p.bs / 2.0 * (S1 + S3);
      c.k3 = k_constant(c3, nu, C3);
      break;
    }
    case ClosedFormKind::cp_min:
      c.k1 = p.bz / 2.0 + p.bq * (c3 * c3 / 2.0 + p.u1 * p.u1 / std::pow(nu, 4) + S1 / 4.0);
      break;
    case ClosedFormKind::cp_bl:
      c.k1 = -p.bl * (p.bl * Lz - p.u1) / (8.0 * p.u3);
      break;
  }
  return c;
}

ClosedState closed_state(const ClosedFormConstants& c, const SystemParams& p, double t) {
  D2 tt(D1(t, 1.0), D1(1.0, 0.0));
  Cyl<D2> v = evaluate(c, p, tt);
  ClosedState s;
  s.r = v.r.v.v;
  s.z = v.z.v.v;
  s.theta = v.theta.v.v;
  s.r_dot = v.r.v.d;
  s.z_dot = v.z.v.d;
  s.theta_dot = v.theta.v.d;
  s.r_ddot = v.r.d.d;
  s.z_ddot = v.z.d.d;
  return s;
}

PhasePoint closed_phase_point(const ClosedFormConstants& c, const SystemParams& p, double t) {
  ClosedState s = closed_state(c, p, t);
  const double ct = std::cos(s.theta);
  const double st = std::sin(s.theta);
  const double ptr = c.Lz / s.r;
  return make_phase_point({s.r * ct, s.r * st, s.z}, {s.r_dot * ct - ptr * st, s.r_dot * st + ptr * ct, s.z_dot});
}

double cylindrical_eom_residual(const ClosedFormConstants& c, const SystemParams& p, double t) {
  ClosedState s = closed_state(c, p, t);
  const double L = c.Lz;
  const double r = s.r;
  const double z = s.z;
  const double r2 = r * r;
  double r_acc = 0.0, z_acc = 0.0, th_rate = 0.0;
  switch (c.kind) {
    case ClosedFormKind::op_min: {
      const double K = p.bs * L - 2.0 * p.u3 + p.bz * p.bz / 4.0 - p.bp * p.bs / 2.0;
      r_acc = -K * r + (L * L + 2.0 * p.u1) / (r2 * r);
      z_acc = -K * z + (p.bp * L + 2.0 * p.u2) / (z * z * z);
      th_rate = p.bs / 2.0 * r2 + L / r2 + p.bs / 2.0 * z * z + p.bp / (2.0 * z * z) + p.bz / 2.0;
      break;
    }
    case ClosedFormKind::cp_min:
      r_acc = (L * L + 2.0 * p.u2) / (r2 * r) - (p.bq * L + 4.0 * p.u3) / 2.0 * r;
      z_acc = -(8.0 * p.u3 + 2.0 * p.bq * L) * z - p.u1;
      th_rate = p.bq / 4.0 * r2 + L / r2 + p.bq * z * z + p.bz / 2.0;
      break;
    case ClosedFormKind::cp_bl:
      // Cylindrical reduction of the translated Hamiltonian, A = bl z (y, -x, 0).
      r_acc = (L * L + 2.0 * p.u2) / (r2 * r) - 2.0 * p.u3 * r;
      z_acc = p.bl * L - p.u1 - 8.0 * p.u3 * z;
      th_rate = L / r2 - p.bl * z;
      break;
  }
  return std::max({rel(s.r_ddot, r_acc), rel(s.z_ddot, z_acc), rel(s.theta_dot, th_rate)});
}

std::optional<ResonanceParams> resonance_check(ResonanceForm form, const SystemParams& p) {
  if (p.bz == 0.0) return std::nullopt;
  const double b2 = p.bz * p.bz;
  double ratio2 = 0.0;  // (n/m)^2
  if (form == ResonanceForm::op) {
    ratio2 = 4.0 * (1.0 - 8.0 * p.u3 / b2);
  } else {
    ratio2 = 8.0 * p.u3 / b2;
  }
  if (!(ratio2 > 0.0)) return std::nullopt;
  const double ratio = std::sqrt(ratio2);
  auto u3_of = [&](int n, int m) {
    double q = static_cast<double>(n) / static_cast<double>(m);
    return form == ResonanceForm::op ? b2 / 8.0 * (1.0 - q * q / 4.0) : q * q * b2 / 8.0;
  };
  const double scale = std::max(std::abs(p.u3), b2 / 8.0);
  for (int m = 1; m <= resonance_max_denominator; ++m) {
    const int n = static_cast<int>(std::lround(ratio * m));
    if (n < 1 || std::gcd(n, m) != 1) continue;
    if (std::abs(u3_of(n, m) - p.u3) <= resonance_rel_tol * scale) return ResonanceParams{n, m};
  }
  return std::nullopt;
}

PhasePoint rotating_frame(double bz, double t, const PhasePoint& s) {
  const double a = 0.5 * bz * t;
  const double c = std::cos(a);
  const double sn = std::sin(a);
  PhasePoint out = s;
  out.q[0] = c * s.q[0] - sn * s.q[1];
  out.q[1] = sn * s.q[0] + c * s.q[1];
  out.p[0] = c * s.p[0] - sn * s.p[1];
  out.p[1] = sn * s.p[0] + c * s.p[1];
  return out;
}

PhasePoint oscillator_frame(double bz, double t, const PhasePoint& s) { return rotating_frame(bz, -t, s); }

namespace {

template <class T> T r2_of(const Vec3<T>& q) { return q[0] * q[0] + q[1] * q[1]; }

SystemSpec field_free(std::string id, std::string tag, const SystemParams& p, ScalarField W) {
  SystemSpec spec;
  spec.id = std::move(id);
  spec.equation_tag = std::move(tag);
  spec.params = p;
  spec.claimed_rank = 5;
  spec.W = W;
  spec.A = CovectorField{VectorField([](const auto& q) {
    using T = typename std::decay_t<decltype(q)>::value_type;
    return Vec3<T>{T(0.0), T(0.0), T(0.0)};
  })};
  spec.B = TwoForm{spec.A.components};
  spec.hamiltonian = Observable("H", 2, [W](const auto& s) { return 0.5 * dot(s.p, s.p) + W(s.q); });
  spec.integrals.emplace_back("Lz", 1, [](const auto& s) { return s.q[0] * s.p[1] - s.q[1] * s.p[0]; });
  return spec;
}

}  // namespace

SystemSpec oscillator_image(OscillatorKind kind, const SystemParams& params) {
  SystemParams p = params;
  p.normalize_resonance();
  const double q = static_cast<double>(p.n) / static_cast<double>(p.m);
  if (kind == OscillatorKind::max5) {
    if (p.u1 != 0.0) throw DomainError("caged oscillator image requires u1 = 0 (otherwise the rotated orbits cannot close)");
    const double nu = q * p.bz / 2.0;
    const double u2 = p.u2;
    const double w = nu * nu / 8.0;
    SystemSpec spec = field_free("caged_oscillator", "cagedosc", p, ScalarField([u2, w](const auto& x) {
                                   return u2 / (x[2] * x[2]) + w * (r2_of(x) + x[2] * x[2]);
                                 }));
    spec.singular_z = u2 != 0.0;
    spec.integrals.emplace_back("Ez", 2, [u2, w](const auto& s) {
      const auto& z = s.q[2];
      return 0.5 * s.p[2] * s.p[2] + u2 / (z * z) + w * z * z;
    });
    spec.integrals.emplace_back("Ex", 2, [w](const auto& s) { return 0.5 * s.p[0] * s.p[0] + w * s.q[0] * s.q[0]; });
    // Angular separation constant of the cage.
    spec.integrals.emplace_back("K", 2, [u2](const auto& s) {
      auto L = cross(s.q, s.p);
      const auto& z = s.q[2];
      return dot(L, L) + 2.0 * u2 * (r2_of(s.q) + z * z) / (z * z);
    });
    return spec;
  }
  if (p.u2 != 0.0) throw DomainError("harmonic oscillator image requires u2 = 0 (the u2/r^2 term breaks closure)");
  const double k = q * q * p.bz * p.bz / 8.0;
  SystemSpec spec = field_free("harmonic_oscillator", "MaxHam6 rotating frame", p, ScalarField([k](const auto& x) {
                                 return k * (r2_of(x) + 4.0 * x[2] * x[2]);
                               }));
  spec.integrals.emplace_back("Ez", 2, [k](const auto& s) { return 0.5 * s.p[2] * s.p[2] + 4.0 * k * s.q[2] * s.q[2]; });
  spec.integrals.emplace_back("Ex", 2, [k](const auto& s) { return 0.5 * s.p[0] * s.p[0] + k * s.q[0] * s.q[0]; });
  // 1:2 resonance between x and z: Re(a_x^2 conj(a_z)), a = p + i omega q.
  const double w = std::sqrt(2.0 * k);
  spec.integrals.emplace_back("Kxz", 3, [w](const auto& s) {
    const auto& x = s.q[0];
    const auto& px = s.p[0];
    return (px * px - w * w * x * x) * s.p[2] + 4.0 * w * w * x * px * s.q[2];
  });
  return spec;
}

double oscillator_image_residual(const SystemSpec& lab, const SystemSpec& oscillator, double bz, double t,
                                 const PhasePoint& lab_state) {
  State6 f = eom_rhs(lab, lab_state);
  const double a = -0.5 * bz * t;
  const double da = -0.5 * bz;
  const double c = std::cos(a);
  const double s = std::sin(a);
  auto rotate = [&](double x, double y) { return std::array<double, 2>{c * x - s * y, s * x + c * y}; };
  auto rotate_rate = [&](double x, double y) { return std::array<double, 2>{da * (-s * x - c * y), da * (c * x - s * y)}; };
  State6 lhs{};
  for (int block = 0; block < 2; ++block) {
    const int o = 3 * block;
    const double* v = block == 0 ? lab_state.q.data() : lab_state.p.data();
    auto rot = rotate(f[o], f[o + 1]);
    auto rate = rotate_rate(v[0], v[1]);
    lhs[o] = rot[0] + rate[0];
    lhs[o + 1] = rot[1] + rate[1];
    lhs[o + 2] = f[o + 2];
  }
  State6 rhs = eom_rhs(oscillator, oscillator_frame(bz, t, lab_state));
  double err = 0.0;
  double scale = 1.0;
  for (int k = 0; k < 6; ++k) {
    err = std::max(err, std::abs(lhs[k] - rhs[k]));
    scale = std::max(scale, std::abs(rhs[k]));
  }
  return err / scale;
}

}  // namespace supermag
