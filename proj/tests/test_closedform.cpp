#include "doctest.h"

#include <cmath>
#include <numbers>

#include "supermag/closedform.hpp"
#include "supermag/dynamics.hpp"
#include "supermag/sampling.hpp"
#include "supermag/systems.hpp"

using namespace supermag;

namespace {

constexpr double pi = std::numbers::pi;

const SystemParams fig1 = SystemParams::parse("u1=2,u2=3/2,u3=-1,bz=7,bp=4,bs=2");
const SystemParams fig4 = SystemParams::parse("u1=10,u2=3/2,u3=1,bz=2,bq=4");
const SystemParams bl_params = SystemParams::parse("u1=1,u2=3/2,u3=1/2,bl=1");

struct Case {
  ClosedFormKind kind;
  const char* system;
  SystemParams params;
};

const std::vector<Case> cases{{ClosedFormKind::op_min, "op_min", fig1},
                              {ClosedFormKind::cp_min, "cp_min", fig4},
                              {ClosedFormKind::cp_bl, "cp_bl", bl_params}};

ClosedFormConstants sample_constants(const Case& c, CounterRng& rng) {
  const double lz = rng.uniform(0.5, 2.0);
  return make_constants(c.kind, c.params, rng.uniform(-0.3, 0.3), rng.uniform(0.0, 2.0 * pi), rng.uniform(-0.3, 0.3),
                        rng.uniform(0.0, 2.0 * pi), rng.uniform(0.0, 2.0 * pi), lz);
}

double phase_distance(const PhasePoint& a, const PhasePoint& b) {
  double d = 0.0;
  double n = 1.0;
  for (int k = 0; k < 3; ++k) {
    d = std::max({d, std::abs(a.q[k] - b.q[k]), std::abs(a.p[k] - b.p[k])});
    n = std::max({n, std::abs(b.q[k]), std::abs(b.p[k])});
  }
  return d / n;
}

}  // namespace

TEST_CASE("frequency formulas") {
  SystemParams op = SystemParams::parse("u1=2,u2=3/2,u3=0,bz=-3,bp=4,bs=0");
  CHECK(frequency(ClosedFormKind::op_min, op, 1.7) == doctest::Approx(3.0).epsilon(1e-15));
  // Figure-1 initial condition has canonical Lz = 1.
  CHECK(frequency(ClosedFormKind::op_min, fig1, 1.0) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(frequency(ClosedFormKind::cp_min, fig4, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(frequency(ClosedFormKind::cp_bl, bl_params, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(frequency(ClosedFormKind::cp_bl, bl_params, -9.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(frequency(ClosedFormKind::cp_min, fig4, -1.5), DomainError);
  CHECK_THROWS_AS(frequency(ClosedFormKind::cp_bl, SystemParams::parse("u3=-1"), 1.0), DomainError);
  CHECK_THROWS_AS(frequency(ClosedFormKind::op_min, SystemParams::parse("bz=1,u3=1"), 0.0), DomainError);
}

TEST_CASE("degenerate amplitudes give constant radius or height") {
  const double lz = 1.3;
  ClosedFormConstants c = make_constants(ClosedFormKind::cp_min, fig4, 0.0, 0.4, 0.2, 1.1, 0.0, lz);
  const double r0 = std::pow(4.0 * (lz * lz + 2.0 * fig4.u2) / (c.nu * c.nu), 0.25);
  ClosedFormConstants b = make_constants(ClosedFormKind::cp_bl, bl_params, 0.2, 0.4, 0.0, 1.1, 0.0, lz);
  const double z0 = (bl_params.bl * lz - bl_params.u1) / (8.0 * bl_params.u3);
  for (double t : {0.0, 0.37, 1.9, 5.2}) {
    CHECK(closed_state(c, fig4, t).r == doctest::Approx(r0).epsilon(1e-14));
    CHECK(closed_state(c, fig4, t).r_dot == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(closed_state(b, bl_params, t).z == doctest::Approx(z0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(make_constants(ClosedFormKind::cp_min, SystemParams::parse("u2=-2,u3=1,bq=1"), 0.1, 0, 0, 0, 0, 0.5),
                  DomainError);
}

TEST_CASE("closed forms satisfy the cylindrical equations of motion") {
  CounterRng rng(51);
  for (const auto& c : cases) {
    for (int draw = 0; draw < 5; ++draw) {
      ClosedFormConstants k = sample_constants(c, rng);
      const double span = 4.0 * pi / k.nu;
      double worst = 0.0;
      for (int i = 0; i <= 1000; ++i) worst = std::max(worst, cylindrical_eom_residual(k, c.params, span * i / 1000.0));
      CHECK_MESSAGE(worst < 1e-9, c.system, " residual ", worst);
    }
  }
}

TEST_CASE("closed forms match numerical integration over one period") {
  CounterRng rng(52);
  for (const auto& c : cases) {
    SystemSpec spec = build_system(c.system, c.params);
    for (int draw = 0; draw < 3; ++draw) {
      ClosedFormConstants k = sample_constants(c, rng);
      const double T = 2.0 * pi / k.nu;
      IntegrateOptions opt;
      opt.dt_out = T / 200.0;
      Trajectory tr = integrate(spec, closed_phase_point(k, c.params, 0.0), T, opt);
      double worst = 0.0;
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        worst = std::max(worst, phase_distance(tr.states[i], closed_phase_point(k, c.params, tr.times[i])));
      }
      CHECK_MESSAGE(worst < 1e-6, c.system, " max deviation ", worst);
    }
  }
}

TEST_CASE("isochronicity: r and z return after 2 pi / nu for any amplitude") {
  CounterRng rng(53);
  for (const auto& c : cases) {
    SystemSpec spec = build_system(c.system, c.params);
    for (int draw = 0; draw < 100; ++draw) {
      ClosedFormConstants k = sample_constants(c, rng);
      const double T = 2.0 * pi / k.nu;
      const double t = rng.uniform(0.0, T);
      ClosedState a = closed_state(k, c.params, t);
      ClosedState b = closed_state(k, c.params, t + T);
      CHECK(std::abs(a.r - b.r) < 1e-12 * std::max(1.0, a.r));
      CHECK(std::abs(a.z - b.z) < 1e-12 * std::max(1.0, std::abs(a.z)));
      if (draw < 5) {
        // Numerical check on a subset: the cylindrical part of the flow returns.
        PhasePoint s = propagate(spec, closed_phase_point(k, c.params, 0.0), 0.0, T, 1e-12);
        ClosedState s0 = closed_state(k, c.params, 0.0);
        const double r = std::hypot(s.q[0], s.q[1]);
        CHECK(std::abs(r - s0.r) < 1e-7 * std::max(1.0, s0.r));
        CHECK(std::abs(s.q[2] - s0.z) < 1e-7 * std::max(1.0, std::abs(s0.z)));
      }
    }
  }
}

TEST_CASE("resonance detection") {
  SystemParams p = SystemParams::parse("bz=2");
  p.u3 = 0.0;
  auto r = resonance_check(ResonanceForm::op, p);
  REQUIRE(r);
  CHECK(r->n == 2);
  CHECK(r->m == 1);
  p.u3 = 7.0 / 32.0;
  r = resonance_check(ResonanceForm::op, p);
  REQUIRE(r);
  CHECK(r->n == 3);
  CHECK(r->m == 2);
  p.u3 = 4.0 / 7.0;  // bz^2/7: (n/m)^2 = 12/7 is irrational
  CHECK_FALSE(resonance_check(ResonanceForm::op, p));
  p.bz = 0.0;
  CHECK_FALSE(resonance_check(ResonanceForm::op, p));

  SystemParams q = SystemParams::parse("bz=3");
  q.u3 = 9.0 / 32.0;  // max6 with n = 1, m = 2
  r = resonance_check(ResonanceForm::max6, q);
  REQUIRE(r);
  CHECK(r->n == 1);
  CHECK(r->m == 2);
}

TEST_CASE("rotating frame") {
  PhasePoint s{{0.3, -1.2, 0.8}, {0.5, 1.1, -0.4}};
  PhasePoint id = rotating_frame(2.5, 0.0, s);
  for (int k = 0; k < 3; ++k) {
    CHECK(id.q[k] == s.q[k]);
    CHECK(id.p[k] == s.p[k]);
  }
  const double bz = 2.5;
  PhasePoint half = rotating_frame(bz, 2.0 * pi / bz, s);
  for (int k = 0; k < 2; ++k) {
    CHECK(half.q[k] == doctest::Approx(-s.q[k]).epsilon(1e-14));
    CHECK(half.p[k] == doctest::Approx(-s.p[k]).epsilon(1e-14));
  }
  CHECK(half.q[2] == s.q[2]);
  PhasePoint back = oscillator_frame(bz, 0.7, rotating_frame(bz, 0.7, s));
  for (int k = 0; k < 3; ++k) CHECK(back.q[k] == doctest::Approx(s.q[k]).epsilon(1e-14));
}

TEST_CASE("oscillator images of the maximally superintegrable systems") {
  struct Img {
    const char* id;
    OscillatorKind kind;
    const char* params;
  };
  for (const Img& im : {Img{"max5", OscillatorKind::max5, "u2=3/2,bz=2,n=3,m=2"},
                        Img{"max6", OscillatorKind::max6, "bz=3,n=1,m=2"}, Img{"max6", OscillatorKind::max6, "bz=2,n=1,m=1"}}) {
    SystemParams p = SystemParams::parse(im.params);
    SystemSpec lab = build_system(im.id, p);
    SystemSpec osc = oscillator_image(im.kind, p);
    CounterRng rng(54);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      PhasePoint s = sample_safe_point(rng);
      worst = std::max(worst, oscillator_image_residual(lab, osc, p.bz, rng.uniform(0.0, 10.0), s));
    }
    CHECK_MESSAGE(worst < 1e-8, im.id, " ", im.params, " residual ", worst);
  }
  // The caged image of n = 3, m = 2, bz = 2 oscillates at nu = 3/2.
  SystemSpec caged = oscillator_image(OscillatorKind::max5, SystemParams::parse("u2=3/2,bz=2,n=3,m=2"));
  PhasePoint s{{0.7, 0.0, 1.0}, {0.0, 0.0, 0.0}};
  State6 f = eom_rhs(caged, s);
  // x'' = -(nu^2 / 4) x, so x^2 + y^2 oscillates at nu.
  CHECK(-f[3] / s.q[0] == doctest::Approx(1.5 * 1.5 / 4.0).epsilon(1e-14));
  // Harmonic image for n = m = 1: the z frequency is twice the planar one.
  SystemSpec harm = oscillator_image(OscillatorKind::max6, SystemParams::parse("bz=2,n=1,m=1"));
  State6 fx = eom_rhs(harm, PhasePoint{{1.0, 0.0, 0.3}, {0.0, 0.0, 0.0}});
  const double wx2 = -fx[3] / 1.0;
  const double wz2 = -fx[5] / 0.3;
  CHECK(wz2 == doctest::Approx(4.0 * wx2).epsilon(1e-14));
  CHECK_THROWS_AS(oscillator_image(OscillatorKind::max5, SystemParams::parse("u1=1,u2=3/2,bz=2,n=3,m=2")), DomainError);
  CHECK_THROWS_AS(oscillator_image(OscillatorKind::max6, SystemParams::parse("u2=1,bz=3,n=1,m=2")), DomainError);
}

TEST_CASE("oscillator integrals pulled back along lab trajectories") {
  struct Img {
    const char* id;
    OscillatorKind kind;
    const char* params;
  };
  for (const Img& im : {Img{"max5", OscillatorKind::max5, "u2=3/2,bz=2,n=3,m=2"}, Img{"max6", OscillatorKind::max6, "bz=3,n=1,m=2"}}) {
    SystemParams p = SystemParams::parse(im.params);
    SystemSpec lab = build_system(im.id, p);
    SystemSpec osc = oscillator_image(im.kind, p);
    IntegrateOptions opt;
    opt.record_traces = false;
    opt.dt_out = 0.05;
    Trajectory tr = integrate(lab, PhasePoint{{1.0, -1.0, 1.0}, {1.0, 0.0, 0.0}}, 30.0, opt);
    std::vector<const Observable*> obs{&osc.hamiltonian};
    for (const auto& g : osc.integrals) obs.push_back(&g);
    for (const Observable* g : obs) {
      const double g0 = (*g)(oscillator_frame(p.bz, 0.0, tr.states.front()));
      double worst = 0.0;
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double gi = (*g)(oscillator_frame(p.bz, tr.times[i], tr.states[i]));
        worst = std::max(worst, std::abs(gi - g0) / std::max(std::abs(g0), 1.0));
      }
      CHECK_MESSAGE(worst < 1e-8, im.id, " ", g->label(), " drift ", worst);
    }
  }
}

TEST_CASE("op_min with b_s = b_p = 0 is isochronous in Lz") {
  SystemParams iso = SystemParams::parse("u1=2,u2=3/2,u3=-1,bz=7,bp=0,bs=0");
  SystemSpec spec = build_system("op_min", iso);
  const double T = 2.0 * pi / std::sqrt(iso.bz * iso.bz - 8.0 * iso.u3);
  CounterRng rng(55);
  for (int draw = 0; draw < 100; ++draw) {
    const double lz = rng.uniform(-3.0, 3.0);
    ClosedFormConstants k = make_constants(ClosedFormKind::op_min, iso, rng.uniform(-0.3, 0.3), rng.uniform(0.0, 2.0 * pi),
                                           rng.uniform(-0.3, 0.3), rng.uniform(0.0, 2.0 * pi), 0.0, lz);
    CHECK(k.nu * T == doctest::Approx(2.0 * pi).epsilon(1e-14));
    PhasePoint s0 = closed_phase_point(k, iso, 0.0);
    PhasePoint s1 = propagate(spec, s0, 0.0, T, 1e-12);
    CHECK(std::abs(std::hypot(s1.q[0], s1.q[1]) - std::hypot(s0.q[0], s0.q[1])) < 1e-8);
    CHECK(std::abs(s1.q[2] - s0.q[2]) < 1e-8);
  }
}
