#include "supermag/dynamics.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace supermag {

namespace odeint = boost::numeric::odeint;

namespace {

// Fehlberg 7(8): advances the eighth-order solution under a seventh-order
// error estimate. Against dopri5 at the same tolerance it takes ~10x fewer
// steps on the fast cp_min excursions and drifts ~5x less.
using Stepper = odeint::runge_kutta_fehlberg78<State6>;

struct Rhs {
  const SystemSpec* spec;
  void operator()(const State6& x, State6& dxdt, double /*t*/) const { dxdt = eom_rhs(*spec, from_state(x)); }
};

double norm6(const State6& a, const State6& b) {
  double s = 0.0;
  for (int k = 0; k < 6; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

void check_tol(double tol) {
  if (!(tol >= min_tol && tol <= max_tol)) throw ConfigError("tol", "must lie in [1e-14, 1e-6]");
}

}  // namespace

bool in_guard_region(const SystemSpec& spec, const PhasePoint& s) {
  double r = std::hypot(s.q[0], s.q[1]);
  return (spec.singular_r && r < guard_radius) || (spec.singular_z && std::abs(s.q[2]) < guard_radius);
}

State6 eom_rhs(const SystemSpec& spec, const PhasePoint& s) {
  if (in_guard_region(spec, s)) {
    throw SingularApproach(spec.id + ": state entered the guard region", 0.0, to_state(s));
  }
  Grad6 g = gradient6(spec.hamiltonian, s);
  return {g[3], g[4], g[5], -g[0], -g[1], -g[2]};
}

PhasePoint time_reversed(const SystemSpec& spec, const PhasePoint& s) {
  Vec3<double> A = spec.A(s.q);
  PhasePoint r = s;
  for (int i = 0; i < 3; ++i) r.p[i] = -s.p[i] - 2.0 * A[i];
  return r;
}

SystemSpec field_reversed(const SystemSpec& spec) {
  SystemSpec out = spec;
  const CovectorField A = spec.A;
  const TwoForm B = spec.B;
  const ScalarField W = spec.W;
  out.A = CovectorField{VectorField([A](const auto& q) {
    auto a = A(q);
    return decltype(a){-a[0], -a[1], -a[2]};
  })};
  out.B = TwoForm{VectorField([B](const auto& q) {
    auto b = B(q);
    return decltype(b){-b[0], -b[1], -b[2]};
  })};
  out.hamiltonian = Observable("H", 2, [A, W](const auto& s) {
    auto pa = s.p - A(s.q);
    return 0.5 * dot(pa, pa) + W(s.q);
  });
  // g'(q, p) = g(q, -p) is conserved by the reversed-field flow.
  for (auto& g : out.integrals) {
    Observable orig = g;
    g = Observable(orig.label(), orig.momentum_order(), [orig](const auto& s) {
      auto t = s;
      for (auto& v : t.p) v = -v;
      return orig.eval(t);
    });
  }
  out.involutions.clear();
  out.decompositions.clear();
  out.closure.reset();
  out.y4.reset();
  return out;
}

PhasePoint reversed_state(const PhasePoint& s) { return {s.q, {-s.p[0], -s.p[1], -s.p[2]}}; }

PhasePoint propagate(const SystemSpec& spec, const PhasePoint& s, double t0, double t1, double tol) {
  State6 x = to_state(s);
  if (t1 == t0) return s;
  double dt0 = std::copysign(std::min(1e-3, std::abs(t1 - t0)), t1 - t0);
  odeint::integrate_adaptive(odeint::make_controlled(tol, 0.0, Stepper()), Rhs{&spec}, x, t0, t1, dt0);
  return from_state(x);
}

Trajectory integrate(const SystemSpec& spec, const PhasePoint& ic, double t_end, const IntegrateOptions& opt) {
  check_tol(opt.tol);
  if (!(t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  auto sp = std::make_shared<const SystemSpec>(spec.y4 ? spec.with_y4_normalized_at(ic) : spec);
  if (in_guard_region(*sp, ic)) throw SingularApproach(spec.id + ": initial state inside the guard region", 0.0, to_state(ic));

  Trajectory tr;
  tr.system_id = spec.id;
  tr.tol = opt.tol;
  tr.spec = sp;
  double dt_out = opt.dt_out > 0.0 ? opt.dt_out : 0.01;
  if (opt.dt_out <= 0.0 && opt.period_estimate) dt_out = std::min(0.01, *opt.period_estimate / 200.0);
  tr.meta = {{"system_id", spec.id}, {"params", spec.params.to_json()}, {"tol", opt.tol}, {"dt_out", dt_out},
             {"t_end", t_end}};
  if (sp->y4) tr.meta["y4_factor_moduli_at_ic"] = sp->y4->factor_moduli(ic);

  std::vector<Observable> monitored;
  if (opt.record_traces) {
    monitored.push_back(sp->hamiltonian);
    for (const auto& g : sp->integrals) monitored.push_back(g);
    for (const auto& g : monitored) tr.trace_labels.push_back(g.label());
    tr.traces.resize(monitored.size());
  }
  // Traces are evaluated in long double: on unbounded orbits (linear_min
  // drifts freely in z) X1 is a difference of terms growing like R^4.
  auto record = [&](double t, const State6& x) {
    PhasePoint s = from_state(x);
    tr.times.push_back(t);
    tr.states.push_back(s);
    Phase<LD> se;
    for (int i = 0; i < 3; ++i) {
      se.q[i] = s.q[i];
      se.p[i] = s.p[i];
    }
    for (std::size_t k = 0; k < monitored.size(); ++k) {
      tr.traces[k].push_back(static_cast<double>(monitored[k].eval(se)));
    }
  };

  const auto n_out = static_cast<long>(std::ceil(t_end / dt_out - 1e-9));
  auto out_time = [&](long k) { return k >= n_out ? t_end : static_cast<double>(k) * dt_out; };

  State6 x0 = to_state(ic);
  record(0.0, x0);
  tr.nodes.push_back({0.0, x0});

  // Pure absolute error control: local error per step <= tol in every
  // component, however large the state.
  auto stepper = odeint::make_controlled(opt.tol, 0.0, Stepper());
  Rhs rhs{sp.get()};
  long next = 1;
  State6 x = x0;
  double t = 0.0;
  double dt = std::min(1e-3, t_end);
  while (next <= n_out) {
    const StepNode prev = tr.nodes.back();
    try {
      int rejected = 0;
      while (stepper.try_step(rhs, x, t, dt) == odeint::fail) {
        if (++rejected > 500) throw DomainError(spec.id + ": step size underflow at t = " + std::to_string(t));
      }
    } catch (const SingularApproach& e) {
      throw SingularApproach(e.what(), prev.t, prev.x);
    } catch (const EvaluationError& e) {
      throw SingularApproach(std::string("non-finite dynamics: ") + e.what(), prev.t, prev.x);
    }
    if (in_guard_region(*sp, from_state(x))) {
      throw SingularApproach(spec.id + ": trajectory entered the guard region", prev.t, prev.x);
    }
    tr.nodes.push_back({t, x});
    // Output samples are re-integrated from the preceding node, like state_at.
    while (next <= n_out && out_time(next) <= t) {
      const double to = out_time(next);
      record(to, to == t ? x : to_state(propagate(*sp, from_state(prev.x), prev.t, to, opt.tol)));
      ++next;
    }
    // Finite-time blow-up (potentials unbounded below) shows in the speed
    // long before |q| grows, so both count as escape.
    const PhasePoint sx = from_state(x);
    const Vec3<double> v = sx.p + sp->A(sx.q);
    if (std::sqrt(dot(sx.q, sx.q)) > opt.escape_radius || std::sqrt(dot(v, v)) > opt.escape_radius) {
      tr.escaped = true;
      break;
    }
    if (static_cast<long>(tr.nodes.size()) > opt.max_steps) {
      throw DomainError(spec.id + ": step budget exhausted at t = " + std::to_string(t));
    }
  }
  tr.meta["steps"] = tr.nodes.size() - 1;
  tr.meta["escaped"] = tr.escaped;
  return tr;
}

PhasePoint Trajectory::state_at(double t) const {
  if (nodes.empty()) throw DomainError("empty trajectory");
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t, [](double v, const StepNode& n) { return v < n.t; });
  if (it != nodes.begin()) --it;
  return propagate(*spec, from_state(it->x), it->t, t, tol);
}

double Trajectory::drift(const std::string& label) const {
  auto it = std::find(trace_labels.begin(), trace_labels.end(), label);
  if (it == trace_labels.end()) throw ConfigError(label, "no trace with this label");
  const auto& v = traces[static_cast<std::size_t>(it - trace_labels.begin())];
  double scale = std::max(std::abs(v.front()), 1.0);
  double d = 0.0;
  for (double g : v) d = std::max(d, std::abs(g - v.front()) / scale);
  return d;
}

nlohmann::json Trajectory::drift_summary() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& l : trace_labels) j[l] = drift(l);
  return j;
}

nlohmann::json PeriodReport::to_json() const {
  nlohmann::json j{{"closed", closed},
                   {"return_distance", return_distance},
                   {"refinement_iterations", refinement_iterations},
                   {"escaped", escaped}};
  j["period"] = period ? nlohmann::json(*period) : nlohmann::json(nullptr);
  j["nearest_return_time"] = nearest_return_time ? nlohmann::json(*nearest_return_time) : nlohmann::json(nullptr);
  return j;
}

PeriodReport detect_period(const SystemSpec& spec, const PhasePoint& ic, double horizon, const PeriodOptions& opt) {
  IntegrateOptions io;
  io.tol = opt.tol;
  io.record_traces = false;
  io.escape_radius = opt.escape_radius;
  if (opt.nu) io.period_estimate = 2.0 * std::numbers::pi / *opt.nu;
  return detect_period(integrate(spec, ic, horizon, io), opt);
}

PeriodReport detect_period(const Trajectory& traj, const PeriodOptions& opt) {
  PeriodReport rep;
  rep.escaped = traj.escaped;
  if (traj.escaped || traj.states.size() < 3) return rep;

  State6 lo = to_state(traj.states.front());
  State6 hi = lo;
  for (const auto& s : traj.states) {
    State6 x = to_state(s);
    for (int k = 0; k < 6; ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  }
  const double diam = norm6(lo, hi);
  if (!(diam > 0.0)) return rep;
  const State6 x0 = to_state(traj.states.front());
  std::vector<double> d;
  d.reserve(traj.states.size());
  for (const auto& s : traj.states) d.push_back(norm6(to_state(s), x0) / diam);

  const std::size_t n = d.size();
  double t_transient = 0.0;
  if (opt.nu) {
    t_transient = 0.1 * 2.0 * std::numbers::pi / *opt.nu;
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i] >= d[i - 1] && d[i] >= d[i + 1]) {
        t_transient = traj.times[i];
        break;
      }
    }
  }

  constexpr double coarse_gate = 0.1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (traj.times[i] <= t_transient) continue;
    if (!(d[i] <= d[i - 1] && d[i] <= d[i + 1] && d[i] < coarse_gate)) continue;
    auto dist2 = [&](double t) {
      double r = norm6(to_state(traj.state_at(t)), x0) / diam;
      return r * r;
    };
    std::uintmax_t iters = 200;
    auto [tmin, fmin] = boost::math::tools::brent_find_minima(dist2, traj.times[i - 1], traj.times[i + 1], 40, iters);
    rep.refinement_iterations += static_cast<int>(iters);
    double dist = std::sqrt(std::max(fmin, 0.0));
    if (dist < rep.return_distance) {
      rep.return_distance = dist;
      rep.nearest_return_time = tmin;
    }
    if (dist < opt.tol_return) {
      rep.closed = true;
      rep.period = tmin;
      rep.return_distance = dist;
      return rep;
    }
  }
  if (!std::isfinite(rep.return_distance)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (traj.times[i] > t_transient && d[i] < rep.return_distance) {
        rep.return_distance = d[i];
        rep.nearest_return_time = traj.times[i];
      }
    }
  }
  return rep;
}

FrequencyMeasurement measure_radial_frequency(const Trajectory& traj) {
  auto r2 = [](const PhasePoint& s) { return s.q[0] * s.q[0] + s.q[1] * s.q[1]; };
  double mean = 0.0;
  for (const auto& s : traj.states) mean += r2(s);
  mean /= static_cast<double>(traj.states.size());
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
    double a = r2(traj.states[i]) - mean;
    double b = r2(traj.states[i + 1]) - mean;
    if (a < 0.0 && b >= 0.0) {
      auto f = [&](double t) { return r2(traj.state_at(t)) - mean; };
      std::uintmax_t iters = 100;
      auto tolerance = boost::math::tools::eps_tolerance<double>(45);
      auto [t0, t1] = boost::math::tools::toms748_solve(f, traj.times[i], traj.times[i + 1], a, b, tolerance, iters);
      crossings.push_back(0.5 * (t0 + t1));
    }
  }
  FrequencyMeasurement m;
  m.crossings = static_cast<int>(crossings.size());
  if (crossings.size() >= 2) {
    m.nu = 2.0 * std::numbers::pi * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());
  }
  return m;
}

}  // namespace supermag
