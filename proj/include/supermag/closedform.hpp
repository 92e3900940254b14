#ifndef SUPERMAG_CLOSEDFORM_HPP
#define SUPERMAG_CLOSEDFORM_HPP

#include <optional>

#include "supermag/params.hpp"
#include "supermag/phase.hpp"
#include "supermag/systems.hpp"

namespace supermag {

enum class ClosedFormKind { op_min, cp_min, cp_bl };

const char* to_string(ClosedFormKind kind);

// Radial/vertical frequency nu. Throws DomainError when the radicand is not
// positive (unbounded or degenerate motion).
//   op_min: sqrt(bz^2 - 8 u3 + 2 bs (2 Lz - bp))
//   cp_min: sqrt(8 u3 + 2 bq Lz)
//   cp_bl:  sqrt(8 u3)
double frequency(ClosedFormKind kind, const SystemParams& p, double Lz);

struct ClosedFormConstants {
  ClosedFormKind kind = ClosedFormKind::op_min;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
  double Lz = 0.0;  // canonical p_theta
  int eps = 1;      // sign of z (op_min only)
  double nu = 0.0;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;  // k3 is unused outside op_min
};

// Fills nu and k1..k3 from the free constants and checks that every radicand
// of the solution is positive. Throws DomainError otherwise.
ClosedFormConstants make_constants(ClosedFormKind kind, const SystemParams& p, double c1, double c2, double c3,
                                   double c4, double c5, double Lz, int eps = 1);

struct ClosedState {
  double r = 0.0, z = 0.0, theta = 0.0;
  double r_dot = 0.0, z_dot = 0.0, theta_dot = 0.0;
  double r_ddot = 0.0, z_ddot = 0.0;
};

// Analytic (r, z, theta) with exact first and second time derivatives. theta
// uses the continuous branch h + atan((k-1) sin h cos h / (cos^2 h + k sin^2 h))
// of atan(k tan h).
ClosedState closed_state(const ClosedFormConstants& c, const SystemParams& p, double t);

// Cartesian canonical phase point on the closed-form orbit at time t.
PhasePoint closed_phase_point(const ClosedFormConstants& c, const SystemParams& p, double t);

// Max relative residual of the cylindrical equations of motion at time t:
// r'' and z'' against the force laws, theta' against the angular equation.
double cylindrical_eom_residual(const ClosedFormConstants& c, const SystemParams& p, double t);

struct ResonanceParams {
  int n = 0;
  int m = 0;
};

// op: u3 = bz^2/8 (1 - n^2/(4 m^2)); max6: u3 = n^2 bz^2 / (8 m^2).
enum class ResonanceForm { op, max6 };

// (n, m) in lowest terms with m <= 64 reproducing u3 to 1e-12 relative, or
// nothing. Also nothing when bz = 0.
std::optional<ResonanceParams> resonance_check(ResonanceForm form, const SystemParams& p);
inline constexpr int resonance_max_denominator = 64;
inline constexpr double resonance_rel_tol = 1e-12;

// Applies R(t), the rotation by bz t / 2 about the z-axis, to q and p.
PhasePoint rotating_frame(double bz, double t, const PhasePoint& s);

// In the symmetric gauge the lab orbit of max5/max6 is R(t) applied to an
// oscillator orbit, so the oscillator image of a lab state is R(t)^-1 s.
PhasePoint oscillator_frame(double bz, double t, const PhasePoint& s);

enum class OscillatorKind { max5, max6 };

// Field-free oscillator conjugate to max5 (caged, nu = n bz / (2m)) or max6
// (harmonic, frequencies n bz/(2m) in xy and n bz/m in z). Requires u1 = 0
// for max5 and u2 = 0 for max6; throws DomainError otherwise.
SystemSpec oscillator_image(OscillatorKind kind, const SystemParams& p);

// Relative mismatch between d/dt of the image of a lab trajectory (through
// the lab equations of motion) and the oscillator vector field at the image.
double oscillator_image_residual(const SystemSpec& lab, const SystemSpec& oscillator, double bz, double t,
                                 const PhasePoint& lab_state);

}  // namespace supermag

#endif  // SUPERMAG_CLOSEDFORM_HPP
