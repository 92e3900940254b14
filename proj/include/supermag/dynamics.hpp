#ifndef SUPERMAG_DYNAMICS_HPP
#define SUPERMAG_DYNAMICS_HPP

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "supermag/systems.hpp"

namespace supermag {

inline constexpr double guard_radius = 0.05;

// (dH/dp, -dH/dq). Throws SingularApproach inside the guard region of a
// singular system and EvaluationError on non-finite derivatives.
State6 eom_rhs(const SystemSpec& spec, const PhasePoint& s);

// True when s lies within the guard radius of a singular surface of spec.
bool in_guard_region(const SystemSpec& spec, const PhasePoint& s);

// Reverses the kinetic momentum in the same field: p -> -p - 2A(q). On its
// own this does not retrace an orbit, since the Lorentz force is odd under
// time reversal; see field_reversed.
PhasePoint time_reversed(const SystemSpec& spec, const PhasePoint& s);

// The same system with A -> -A (so B -> -B). The flow of spec from s, reversed
// in time, is the flow of field_reversed(spec) from reversed_state(s).
SystemSpec field_reversed(const SystemSpec& spec);
PhasePoint reversed_state(const PhasePoint& s);

struct IntegrateOptions {
  double tol = 1e-12;
  // Output spacing; 0 selects min(0.01, period_estimate / 200).
  double dt_out = 0.0;
  std::optional<double> period_estimate;
  bool record_traces = true;
  // Integration stops (escaped = true) once |q| or the speed |p + A| exceeds this.
  double escape_radius = std::numeric_limits<double>::infinity();
  // Accepted steps before integrate throws DomainError.
  long max_steps = 5'000'000;
};

inline constexpr double min_tol = 1e-14;
inline constexpr double max_tol = 1e-6;

struct StepNode {
  double t;
  State6 x;
};

class Trajectory {
 public:
  std::string system_id;
  nlohmann::json meta;
  double tol = 1e-12;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<std::string> trace_labels;         // H, X1, X2, Y3[, Y4]
  std::vector<std::vector<double>> traces;       // traces[k][i] at times[i]
  std::vector<StepNode> nodes;                   // accepted integrator steps
  bool escaped = false;

  // State at any t in [0, t_end], re-integrated from the nearest preceding
  // step node at the trajectory tolerance. This is the dense output.
  PhasePoint state_at(double t) const;

  // max_i |g(t_i) - g(0)| / max(|g(0)|, 1).
  double drift(const std::string& label) const;
  nlohmann::json drift_summary() const;

  double t_end() const { return times.empty() ? 0.0 : times.back(); }

  std::shared_ptr<const SystemSpec> spec;
};

Trajectory integrate(const SystemSpec& spec, const PhasePoint& ic, double t_end, const IntegrateOptions& opt = {});

// Integrates between two times with the controlled stepper only.
PhasePoint propagate(const SystemSpec& spec, const PhasePoint& s, double t0, double t1, double tol);

struct PeriodReport {
  bool closed = false;
  std::optional<double> period;
  double return_distance = std::numeric_limits<double>::infinity();  // relative to trajectory diameter
  std::optional<double> nearest_return_time;                         // where return_distance was attained
  int refinement_iterations = 0;
  bool escaped = false;

  nlohmann::json to_json() const;
};

struct PeriodOptions {
  double tol_return = 1e-4;
  double tol = 1e-12;
  // When given, the transient window is 10% of 2 pi / nu; otherwise it ends
  // at the first local maximum of the return distance.
  std::optional<double> nu;
  double escape_radius = 1e3;
};

PeriodReport detect_period(const SystemSpec& spec, const PhasePoint& ic, double horizon,
                           const PeriodOptions& opt = {});
PeriodReport detect_period(const Trajectory& traj, const PeriodOptions& opt = {});

struct FrequencyMeasurement {
  double nu = 0.0;
  int crossings = 0;
};

// Dominant frequency of r^2(t) from its upward crossings of the sample mean,
// each refined by root finding on the dense evaluator.
FrequencyMeasurement measure_radial_frequency(const Trajectory& traj);

}  // namespace supermag

#endif  // SUPERMAG_DYNAMICS_HPP
