#include "supermag/poisson.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>

namespace supermag {

double poisson(const Observable& f, const Observable& g, const PhasePoint& s) {
  Grad6 a = gradient6(f, s);
  Grad6 b = gradient6(g, s);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += a[i] * b[3 + i] - a[3 + i] * b[i];
  return sum;
}

double normalized_bracket(const Observable& f, const Observable& g, const PhasePoint& s) {
  Grad6 a = gradient6(f, s);
  Grad6 b = gradient6(g, s);
  double sum = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (int i = 0; i < 3; ++i) sum += a[i] * b[3 + i] - a[3 + i] * b[i];
  for (int k = 0; k < 6; ++k) {
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  double scale = std::sqrt(na * nb);
  return scale > 0.0 ? std::abs(sum) / scale : std::abs(sum);
}

Observable bracket_observable(const Observable& f, const Observable& g) {
  return Observable("{" + f.label() + "," + g.label() + "}", -1, [f, g](const auto& s) {
    using T = typename std::decay_t<decltype(s.q)>::value_type;
    if constexpr (can_lift_v<T>) {
      return poisson_at(f, g, s);
    } else {
      nesting_exhausted();
      return T(0.0);
    }
  });
}

Observable product_observable(const Observable& f, const Observable& g) {
  int order = f.momentum_order() < 0 || g.momentum_order() < 0 ? -1 : f.momentum_order() + g.momentum_order();
  return Observable(f.label() + "*" + g.label(), order, [f, g](const auto& s) { return f.eval(s) * g.eval(s); });
}

nlohmann::json CheckReport::to_json() const {
  return {{"system_id", system_id}, {"check", check},         {"samples", samples}, {"max_residual", max_residual},
          {"mean_residual", mean_residual}, {"tolerance", tolerance}, {"pass", pass}};
}

bool evaluable_at(const SystemSpec& spec, const PhasePoint& s) {
  if (!std::isfinite(spec.hamiltonian(s))) return false;
  for (const auto& g : spec.integrals) {
    if (!std::isfinite(g(s))) return false;
  }
  return true;
}

PhasePoint sample_for(const SystemSpec& spec, CounterRng& rng) {
  return sample_safe_point(rng, [&spec](const PhasePoint& s) { return evaluable_at(spec, s); });
}

namespace {

template <class F>
CheckReport sample_check(const SystemSpec& spec, std::string check, int samples, double tol, CounterRng& rng,
                         F residual) {
  CheckReport r;
  r.system_id = spec.id;
  r.check = std::move(check);
  r.samples = samples;
  r.tolerance = tol;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    double v = 0.0;
    for (int attempt = 0;; ++attempt) {
      PhasePoint s = sample_for(spec, rng);
      try {
        v = residual(s);
        break;
      } catch (const EvaluationError&) {
        if (attempt > 100) throw;
      }
    }
    if (!std::isfinite(v)) v = INFINITY;
    r.max_residual = std::max(r.max_residual, v);
    sum += v;
  }
  r.mean_residual = samples > 0 ? sum / samples : 0.0;
  r.pass = r.max_residual < tol;
  return r;
}

}  // namespace

CheckReport is_integral(const SystemSpec& spec, const Observable& g, int samples, double tol, CounterRng& rng) {
  const Observable& H = spec.hamiltonian;
  return sample_check(spec, "{" + g.label() + ",H}", samples, tol, rng,
                      [&](const PhasePoint& s) { return normalized_bracket(g, H, s); });
}

CheckReport involution(const SystemSpec& spec, const std::string& a, const std::string& b, int samples, double tol,
                       CounterRng& rng) {
  const Observable& fa = spec.integral(a);
  const Observable& fb = spec.integral(b);
  return sample_check(spec, "{" + a + "," + b + "}", samples, tol, rng,
                      [&](const PhasePoint& s) { return normalized_bracket(fa, fb, s); });
}

RankResult functional_rank(const std::vector<Observable>& observables, const PhasePoint& s) {
  Eigen::MatrixXd J(static_cast<Eigen::Index>(observables.size()), 6);
  for (std::size_t i = 0; i < observables.size(); ++i) {
    Grad6 g = gradient6(observables[i], s);
    double norm = 0.0;
    for (double v : g) norm += v * v;
    norm = norm > 0.0 ? std::sqrt(norm) : 1.0;
    for (int k = 0; k < 6; ++k) J(static_cast<Eigen::Index>(i), k) = g[k] / norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& sv = svd.singularValues();
  RankResult r;
  r.singular_values.assign(sv.data(), sv.data() + sv.size());
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rank_threshold * smax) ++r.rank;
  }
  return r;
}

RankVote rank_vote(const SystemSpec& spec, int points, CounterRng& rng) {
  std::vector<Observable> obs{spec.hamiltonian};
  obs.insert(obs.end(), spec.integrals.begin(), spec.integrals.end());
  RankVote v;
  v.points = points;
  std::map<int, int> counts;
  for (int i = 0; i < points; ++i) {
    PhasePoint s = sample_for(spec, rng);
    int r = functional_rank(obs, s).rank;
    v.ranks.push_back(r);
    ++counts[r];
  }
  for (const auto& [rank, count] : counts) {
    if (count > v.agreeing) {
      v.agreeing = count;
      v.majority_rank = rank;
    }
  }
  return v;
}

QuadraticAnsatz hamiltonian_ansatz(const ScalarField& W) {
  QuadraticAnsatz a;
  auto zero = [](const auto& q) { return 0.0 * q[0]; };
  auto half = [](const auto& q) { return 0.0 * q[0] + 0.5; };
  for (int k = 0; k < 6; ++k) a.f[k] = k < 3 ? ScalarField(half) : ScalarField(zero);
  for (auto& s : a.s) s = ScalarField(zero);
  a.m0 = W;
  return a;
}

DeterminingResiduals determining_residuals(const QuadraticAnsatz& an, const TwoForm& Bform, const ScalarField& W,
                                           const std::vector<Vec3<double>>& grid) {
  DeterminingResiduals out;
  out.points = static_cast<int>(grid.size());
  for (const auto& qd : grid) {
    // Extended precision: s . grad W alone reaches 1e7 at op_min parameters.
    const Vec3<LD> q{qd[0], qd[1], qd[2]};
    std::array<LD, 6> f;
    std::array<Vec3<LD>, 6> df;
    for (int k = 0; k < 6; ++k) {
      f[k] = an.f[k](q);
      df[k] = partials_at(an.f[k], q);
    }
    std::array<LD, 3> s;
    std::array<Vec3<LD>, 3> ds;
    for (int k = 0; k < 3; ++k) {
      s[k] = an.s[k](q);
      ds[k] = partials_at(an.s[k], q);
    }
    Vec3<LD> dm = partials_at(an.m0, q);
    Vec3<LD> dW = partials_at(W, q);
    Vec3<LD> B = Bform(q);
    const LD f11 = f[0], f22 = f[1], f33 = f[2], f12 = f[3], f13 = f[4], f23 = f[5];
    const auto &d11 = df[0], &d22 = df[1], &d33 = df[2], &d12 = df[3], &d13 = df[4], &d23 = df[5];
    const LD s1 = s[0], s2 = s[1], s3 = s[2];
    const auto &ds1 = ds[0], &ds2 = ds[1], &ds3 = ds[2];
    const LD Bx = B[0], By = B[1], Bz = B[2];
    enum { X, Y, Z };

    const std::array<LD, 10> third{
        d11[X],
        d11[Y] + d12[X],
        d11[Z] + d13[X],
        d22[X] + d12[Y],
        d22[Y],
        d22[Z] + d23[Y],
        d33[X] + d13[Z],
        d33[Y] + d23[Z],
        d33[Z],
        d23[X] + d13[Y] + d12[Z],
    };
    const std::array<LD, 6> second{
        ds1[X] - (f13 * By - f12 * Bz),
        ds1[Y] - (-ds2[X] - f13 * Bx + f23 * By + 2.0 * (f11 - f22) * Bz),
        ds2[Y] - (-f23 * Bx + f12 * Bz),
        ds2[Z] - (-ds3[Y] + 2.0 * (f22 - f33) * Bx - f12 * By + f13 * Bz),
        ds3[Z] - (f23 * Bx - f13 * By),
        ds3[X] - (-ds1[Z] + f12 * Bx - 2.0 * (f11 - f33) * By - f23 * Bz),
    };
    const std::array<LD, 3> first{
        dm[X] - (2.0 * f11 * dW[X] + f12 * dW[Y] + f13 * dW[Z] + s3 * By - s2 * Bz),
        dm[Y] - (f12 * dW[X] + 2.0 * f22 * dW[Y] + f23 * dW[Z] - s3 * Bx + s1 * Bz),
        dm[Z] - (f13 * dW[X] + f23 * dW[Y] + 2.0 * f33 * dW[Z] + s2 * Bx - s1 * By),
    };
    const LD zeroth = s1 * dW[X] + s2 * dW[Y] + s3 * dW[Z];

    auto update = [](double& acc, LD v) {
      acc = std::max(acc, std::isfinite(v) ? static_cast<double>(std::abs(v)) : INFINITY);
    };
    for (LD v : third) update(out.tier[0], v);
    for (LD v : second) update(out.tier[1], v);
    for (LD v : first) update(out.tier[2], v);
    update(out.tier[3], zeroth);
  }
  return out;
}

ClosureEntry closure_residual(const SystemSpec& spec, const PhasePoint& s, const ClosureOptions& opt) {
  if (!spec.closure) throw ConfigError("system", spec.id + " has no closure polynomial");
  const auto& cl = *spec.closure;
  Phase<LD> se;
  for (int i = 0; i < 3; ++i) {
    se.q[i] = s.q[i];
    se.p[i] = s.p[i];
  }
  LD bracket = poisson_at(spec.integral(cl.lhs_first), spec.integral(cl.lhs_second), se);
  std::vector<LD> terms = cl.terms(spec.hamiltonian.eval(se), spec.integral("X1").eval(se),
                                   spec.integral("X2").eval(se), spec.integral("Y3").eval(se));
  if (opt.flip_term) terms.at(static_cast<std::size_t>(*opt.flip_term)) *= -1.0L;
  LD lhs = (opt.literal_sign ? 1.0L : static_cast<LD>(cl.lhs_sign)) * bracket * bracket;
  LD rhs = 0.0L;
  for (LD t : terms) rhs += t;
  ClosureEntry e;
  e.lhs = static_cast<double>(lhs);
  e.rhs = static_cast<double>(rhs);
  LD scale = std::max({1.0L, std::abs(lhs), std::abs(rhs)});
  e.residual = static_cast<double>(std::abs(lhs - rhs) / scale);
  return e;
}

ClosureReport closure_report(const SystemSpec& spec, int samples, double tol, CounterRng& rng,
                             const ClosureOptions& opt) {
  ClosureReport rep;
  std::string check = "closure";
  if (opt.flip_term) check += " (term " + std::to_string(*opt.flip_term) + " negated)";
  if (opt.literal_sign) check += " (printed sign)";
  rep.summary = sample_check(spec, check, samples, tol, rng, [&](const PhasePoint& s) {
    ClosureEntry e = closure_residual(spec, s, opt);
    rep.entries.push_back(e);
    return e.residual;
  });
  return rep;
}

}  // namespace supermag
