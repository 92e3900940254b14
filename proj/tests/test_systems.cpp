#include "doctest.h"

#include <cmath>
#include <set>

#include "supermag/dynamics.hpp"
#include "supermag/forms.hpp"
#include "supermag/poisson.hpp"
#include "supermag/systems.hpp"

using namespace supermag;

namespace {

const std::vector<std::string> serializable_ids{"op_min", "cp_min",     "cp_general", "cp_bl", "max5",
                                                "max6",   "linear_min", "linear_max", "free"};

SystemSpec default_system(const std::string& id) {
  return build_system(id, SystemParams::parse(catalog_entry(id).default_params));
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("catalog ids, tags and claimed ranks") {
  std::set<std::string> ids;
  for (const auto& e : catalog()) ids.insert(e.id);
  CHECK(ids.size() == catalog().size());
  for (const char* id : {"op_min", "cp_min", "cp_general", "cp_bl", "max5", "max6", "linear_min", "linear_max",
                         "family_cp", "family_oblate", "family_prolate", "free"}) {
    CHECK(ids.count(id) == 1);
  }
  CHECK(catalog_entry("op_min").equation_tag == "OPHmin");
  CHECK(catalog_entry("cp_min").equation_tag == "CPHmin");
  CHECK(catalog_entry("cp_general").equation_tag == "Hgen");
  CHECK(catalog_entry("max5").equation_tag == "MaxHam5");
  CHECK(catalog_entry("max6").equation_tag == "MaxHam6");
  CHECK(catalog_entry("family_cp").equation_tag == "SSecCP");
  CHECK(catalog_entry("family_oblate").equation_tag == "SSecOS");
  CHECK(catalog_entry("family_prolate").equation_tag == "SSecPS");
  CHECK(catalog_entry("max5").integrals.back().second == "2(n+2m)");
  CHECK(catalog_entry("max6").integrals.back().second == "2n+m");
  CHECK_FALSE(catalog_entry("family_cp").serializable);

  for (const auto& e : catalog()) {
    SystemSpec spec = build_system(e.id, SystemParams::parse(e.default_params));
    CHECK(spec.equation_tag == e.equation_tag);
    CHECK(spec.claimed_rank == e.claimed_rank);
    REQUIRE(spec.integrals.size() == e.integrals.size());
    for (std::size_t i = 0; i < e.integrals.size(); ++i) CHECK(spec.integrals[i].label() == e.integrals[i].first);
  }
  try {
    catalog_entry("nonsense");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.key() == "system");
  }
  CHECK_THROWS_AS(build_system("nonsense", {}), ConfigError);
}

TEST_CASE("field-free parameter sets are rejected") {
  CHECK_THROWS_AS(build_system("op_min", SystemParams::parse("u1=1")), DomainError);
  CHECK_THROWS_AS(build_system("max6", SystemParams::parse("n=1,m=2")), DomainError);
}

TEST_CASE("curl of the vector potential equals the printed field") {
  for (const auto& id : serializable_ids) {
    SystemSpec spec = default_system(id);
    CounterRng rng(21);
    for (int i = 0; i < 200; ++i) {
      PhasePoint s = sample_for(spec, rng);
      Vec3<double> dA = exterior_derivative(spec.A, s.q);
      Vec3<double> b = spec.B(s.q);
      for (int k = 0; k < 3; ++k) CHECK_MESSAGE(rel(dA[k], b[k]) < 1e-12, id);
      CHECK_MESSAGE(std::abs(divergence(spec.B, s.q)) < 1e-11, id);
    }
  }
}

TEST_CASE("Hamilton's equations reproduce the Lorentz force") {
  // With unit mass and charge -1: d/dt (p + A) = -v x B - grad W, v = p + A.
  for (const auto& id : serializable_ids) {
    SystemSpec spec = default_system(id);
    CounterRng rng(22);
    for (int i = 0; i < 200; ++i) {
      PhasePoint s = sample_for(spec, rng);
      State6 f = eom_rhs(spec, s);
      Vec3<double> v = s.p + spec.A(s.q);
      Vec3<double> qdot{f[0], f[1], f[2]};
      for (int k = 0; k < 3; ++k) CHECK_MESSAGE(std::abs(qdot[k] - v[k]) < 1e-13 * std::max(1.0, std::abs(v[k])), id);
      auto J = jacobian_at(spec.A.components, s.q);
      Vec3<double> gw = partials_at(spec.W, s.q);
      Vec3<double> force = cross(v, spec.B(s.q));
      for (int k = 0; k < 3; ++k) {
        double dA_dt = J[k][0] * qdot[0] + J[k][1] * qdot[1] + J[k][2] * qdot[2];
        double lhs = f[3 + k] + dA_dt;
        double rhs = -force[k] - gw[k];
        CHECK_MESSAGE(std::abs(lhs - rhs) <= 1e-11 * std::max({1.0, std::abs(lhs), std::abs(rhs)}), id);
      }
    }
  }
}

TEST_CASE("integrable families match their curvilinear expressions") {
  for (ChartKind kind : {ChartKind::circular_parabolic, ChartKind::oblate_spheroidal, ChartKind::prolate_spheroidal}) {
    IntegrableFamily fam;
    fam.kind = kind;
    fam.a = 1.2;
    fam.beta1 = polynomial_function({0.3, 0.5, -0.2});
    fam.beta2 = polynomial_function({-0.1, 0.4, 0.25});
    fam.rho1 = polynomial_function({0.0, 0.7, 0.1});
    fam.rho2 = polynomial_function({0.2, 0.0, 0.3});
    SystemSpec spec = build_family(fam);
    Observable printed = family_printed_hamiltonian(fam);
    TwoForm printed_field = family_printed_field(fam);
    CounterRng rng(23);
    for (int i = 0; i < 100; ++i) {
      PhasePoint s = sample_for(spec, rng);
      CHECK(rel(printed(s), spec.hamiltonian(s)) < 1e-11);
      Vec3<double> b1 = printed_field(s.q);
      Vec3<double> b2 = exterior_derivative(spec.A, s.q);
      for (int k = 0; k < 3; ++k) CHECK(rel(b1[k], b2[k]) < 1e-10);
    }
    auto vr = is_integral(spec, spec.integral("X1"), 200, 1e-10, rng);
    CHECK(vr.pass);
  }
}

TEST_CASE("constant-field choice of the family functions") {
  for (ChartKind kind : {ChartKind::circular_parabolic, ChartKind::oblate_spheroidal, ChartKind::prolate_spheroidal}) {
    IntegrableFamily fam = constant_field_family(kind, 1.7, 0.9);
    SystemSpec spec = build_family(fam);
    CounterRng rng(24);
    for (int i = 0; i < 100; ++i) {
      PhasePoint s = sample_for(spec, rng);
      Vec3<double> b = family_printed_field(fam)(s.q);
      CHECK(std::abs(b[0]) < 1e-12);
      CHECK(std::abs(b[1]) < 1e-12);
      CHECK(b[2] == doctest::Approx(1.7).epsilon(1e-12));
    }
  }
}

TEST_CASE("general circular parabolic system is a translate of a normalized branch") {
  // b_q != 0: z -> z - b_l / (2 b_q); b_q = 0: z -> z - b_z / (2 b_l).
  struct Case {
    std::string params;
    std::string inner_id;
  };
  for (const Case& c : {Case{"u1=1,u2=3/2,u3=1,bz=2,bl=1,bq=4", "cp_min"}, Case{"u1=1,u2=3/2,u3=1,bz=2,bl=1", "cp_bl"}}) {
    SystemParams p = SystemParams::parse(c.params);
    SystemSpec general = build_system("cp_general", p);
    double shift = p.bq != 0.0 ? p.bl / (2.0 * p.bq) : p.bz / (2.0 * p.bl);
    SystemParams ip = p;
    ip.u1 = p.u1 + 8.0 * p.u3 * shift;
    if (p.bq != 0.0) {
      ip.bl = 0.0;
      ip.bz = p.bz - p.bl * p.bl / (2.0 * p.bq);
    } else {
      ip.bz = 0.0;
    }
    SystemSpec inner = build_system(c.inner_id, ip);
    CounterRng rng(25);
    std::optional<double> offset;
    for (int i = 0; i < 200; ++i) {
      PhasePoint s = sample_for(general, rng);
      PhasePoint t = s;
      t.q[2] -= shift;
      if (!evaluable_at(inner, t)) continue;
      double d = general.hamiltonian(s) - inner.hamiltonian(t);
      if (!offset) offset = d;
      CHECK(std::abs(d - *offset) < 1e-11 * std::max(1.0, std::abs(general.hamiltonian(s))));
      Vec3<double> a1 = general.A(s.q);
      Vec3<double> a2 = inner.A(t.q);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(a1[k] - a2[k]) < 1e-12);
    }
    CHECK(offset.has_value());
  }
}

TEST_CASE("resonance parameters of the maximal systems") {
  SystemSpec m5 = build_system("max5", SystemParams::parse("u2=3/2,bz=2,n=3,m=2"));
  CHECK(m5.params.u3 == doctest::Approx(7.0 / 32.0).epsilon(1e-15));
  CHECK(m5.integral("Y4").momentum_order() == 14);
  SystemSpec m5r = build_system("max5", SystemParams::parse("u2=3/2,bz=2,n=6,m=4"));
  CHECK(m5r.params.n == 3);
  CHECK(m5r.params.m == 2);
  SystemSpec m6 = build_system("max6", SystemParams::parse("bz=3,n=1,m=2"));
  CHECK(m6.params.u3 == doctest::Approx(9.0 / 32.0).epsilon(1e-15));
  CHECK(m6.integral("Y4").momentum_order() == 4);
}

TEST_CASE("quadratic ansatz observables equal the integrals") {
  for (const char* id : {"op_min", "cp_min", "cp_bl"}) {
    SystemSpec spec = default_system(id);
    CounterRng rng(26);
    for (const auto& [label, an] : spec.decompositions) {
      Observable o = ansatz_observable(label, an, spec.A);
      for (int i = 0; i < 100; ++i) {
        PhasePoint s = sample_for(spec, rng);
        CHECK_MESSAGE(rel(o(s), spec.integral(label)(s)) < 1e-12, id, " ", label);
      }
    }
    Observable h = ansatz_observable("H", hamiltonian_ansatz(spec.W), spec.A);
    PhasePoint s = sample_for(spec, rng);
    CHECK(rel(h(s), spec.hamiltonian(s)) < 1e-13);
  }
}

TEST_CASE("explicit unit-resonance Y4 is proportional to the complex-product form") {
  for (const char* text : {"max5|u2=3/2,bz=2,n=1,m=1", "max6|bz=3,n=1,m=1"}) {
    std::string s(text);
    auto bar = s.find('|');
    SystemSpec spec = build_system(s.substr(0, bar), SystemParams::parse(s.substr(bar + 1)));
    REQUIRE(spec.y4);
    REQUIRE(spec.y4->explicit_unit_form);
    CounterRng rng(27);
    PhasePoint s0 = sample_for(spec, rng);
    SystemSpec norm = spec.with_y4_normalized_at(s0);
    const Observable& complex_form = norm.integral("Y4");
    const Observable& explicit_form = *spec.y4->explicit_unit_form;
    // One rescaling fixed at s0, then compared everywhere else.
    double c = explicit_form(s0) / complex_form(s0);
    REQUIRE(std::isfinite(c));
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      PhasePoint t = sample_for(spec, rng);
      double e = explicit_form(t);
      double f = c * complex_form(t);
      worst = std::max(worst, std::abs(e - f) / std::max(std::abs(e), std::abs(f)));
    }
    CHECK_MESSAGE(worst < 1e-9, s, " worst ", worst);
  }
}

TEST_CASE("spec json marks family systems as non-serializable") {
  CHECK(default_system("op_min").to_json()["serializable"] == true);
  auto j = build_system("family_cp", SystemParams::parse(catalog_entry("family_cp").default_params)).to_json();
  CHECK(j["serializable"] == false);
  CHECK(j["params"].is_null());
}
