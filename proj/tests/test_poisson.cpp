#include "doctest.h"

#include <cmath>

#include "supermag/poisson.hpp"
#include "supermag/systems.hpp"
#include "supermag/verify.hpp"

using namespace supermag;

namespace {

SystemSpec default_system(const std::string& id) {
  return build_system(id, SystemParams::parse(catalog_entry(id).default_params));
}

const std::vector<std::string> superintegrable_ids{"op_min", "cp_min", "cp_general", "cp_bl",
                                                   "max5",   "max6",   "linear_min", "linear_max"};

}  // namespace

TEST_CASE("every listed integral commutes with H") {
  for (const auto& id : superintegrable_ids) {
    SystemSpec spec = default_system(id);
    CounterRng rng(31);
    for (const auto& g : spec.integrals) {
      CheckReport r = is_integral(spec, g, 1000, 1e-10, rng);
      CHECK_MESSAGE(r.pass, id, " ", g.label(), " max ", r.max_residual);
      CHECK(r.samples == 1000);
    }
  }
  for (const char* id : {"family_cp", "family_oblate", "family_prolate", "free"}) {
    SystemSpec spec = default_system(id);
    CounterRng rng(32);
    for (const auto& g : spec.integrals) CHECK_MESSAGE(is_integral(spec, g, 300, 1e-10, rng).pass, id, " ", g.label());
  }
}

TEST_CASE("claimed involutions") {
  for (const auto& id : superintegrable_ids) {
    SystemSpec spec = default_system(id);
    CounterRng rng(33);
    for (const auto& [a, b] : spec.involutions) {
      CheckReport r = involution(spec, a, b, 500, 1e-10, rng);
      CHECK_MESSAGE(r.pass, id, " {", a, ",", b, "} max ", r.max_residual);
    }
  }
}

TEST_CASE("linear_max: {Y3, Y4} is the constant b_z") {
  // {p^A_x, p^A_y} = -b_z, and each of {p^A_x, -b_z x}, {b_z y, p^A_y} adds b_z.
  for (double bz : {2.0, -0.7, 5.0}) {
    SystemParams p = SystemParams::parse("u1=1");
    p.bz = bz;
    SystemSpec spec = build_system("linear_max", p);
    CounterRng rng(34);
    for (int i = 0; i < 200; ++i) {
      PhasePoint s = sample_for(spec, rng);
      CHECK(poisson(spec.integral("Y3"), spec.integral("Y4"), s) == doctest::Approx(bz).epsilon(1e-14));
    }
  }
}

TEST_CASE("functional rank by majority vote") {
  struct Expect {
    const char* id;
    int rank;
  };
  for (const Expect& e : {Expect{"op_min", 4}, Expect{"cp_min", 4}, Expect{"cp_general", 4}, Expect{"cp_bl", 4},
                          Expect{"linear_min", 4}, Expect{"max5", 5}, Expect{"max6", 5}, Expect{"linear_max", 5},
                          Expect{"family_cp", 3}, Expect{"family_oblate", 3}, Expect{"family_prolate", 3}}) {
    SystemSpec spec = default_system(e.id);
    CHECK(spec.claimed_rank == e.rank);
    CounterRng rng(35);
    RankVote v = rank_vote(spec, 20, rng);
    CHECK_MESSAGE(v.majority_rank == e.rank, e.id);
    CHECK(v.points == 20);
    CHECK(2 * v.agreeing > v.points);
  }
}

TEST_CASE("rank detects a dependent observable") {
  SystemSpec spec = default_system("op_min");
  Observable dup = product_observable(spec.integral("X2"), spec.integral("X2"));
  CounterRng rng(36);
  PhasePoint s = sample_for(spec, rng);
  auto r = functional_rank({spec.hamiltonian, spec.integral("X1"), spec.integral("X2"), dup}, s);
  CHECK(r.rank == 3);
  CHECK(r.singular_values.size() == 4);
}

TEST_CASE("closure polynomials") {
  for (const char* id : {"op_min", "cp_min"}) {
    SystemSpec spec = default_system(id);
    REQUIRE(spec.closure);
    CounterRng rng(37);
    ClosureReport rep = closure_report(spec, 1000, 1e-9, rng);
    CHECK_MESSAGE(rep.summary.pass, id, " max ", rep.summary.max_residual);
    CHECK(rep.summary.max_residual < 1e-9);
  }
  // Figure-1 parameters, where the op_min terms are largest.
  SystemSpec fig1 = build_system("op_min", SystemParams::parse("u1=2,u2=3/2,u3=-1,bz=7,bp=4,bs=2"));
  CounterRng rng(38);
  CHECK(closure_report(fig1, 1000, 1e-9, rng).summary.pass);
}

TEST_CASE("closure negative controls") {
  for (const char* id : {"op_min", "cp_min"}) {
    SystemSpec spec = default_system(id);
    std::size_t n_terms = spec.closure->terms(1, 1, 1, 1).size();
    for (std::size_t k = 0; k < n_terms; ++k) {
      CounterRng rng(40);
      ClosureOptions opt;
      opt.flip_term = static_cast<int>(k);
      ClosureReport rep = closure_report(spec, 50, 1e-9, rng, opt);
      CHECK_MESSAGE(rep.summary.max_residual > 1e-2, id, " term ", k);
      CHECK_FALSE(rep.summary.pass);
    }
  }
  // The printed CPHmin sign: P = -({Y3, X1})^2, so the literal reading misses
  // by |lhs - rhs| / max(|lhs|, |rhs|) = 2 wherever the bracket is large.
  SystemSpec cp = default_system("cp_min");
  CHECK(cp.closure->lhs_sign == -1.0);
  CounterRng rng(41);
  ClosureOptions lit;
  lit.literal_sign = true;
  ClosureReport rep = closure_report(cp, 200, 1e-9, rng, lit);
  CHECK_FALSE(rep.summary.pass);
  CHECK(rep.summary.max_residual == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("determining equations of the quadratic integrals") {
  auto grid = safe_grid(5);
  for (const char* id : {"op_min", "cp_min", "cp_bl"}) {
    SystemSpec spec = default_system(id);
    REQUIRE(spec.decompositions.size() == 3);
    for (const auto& [label, an] : spec.decompositions) {
      DeterminingResiduals d = determining_residuals(an, spec.B, spec.W, grid);
      CHECK(d.points > 0);
      for (int t = 0; t < 4; ++t) CHECK_MESSAGE(d.tier[t] < 1e-10, id, " ", label, " tier ", t, " = ", d.tier[t]);
    }
    DeterminingResiduals h = determining_residuals(hamiltonian_ansatz(spec.W), spec.B, spec.W, grid);
    for (int t = 0; t < 4; ++t) CHECK(h.tier[t] < 1e-10);
  }
}

TEST_CASE("mutated dynamics fail the integral checks") {
  struct Case {
    const char* id;
    const char* mutation;
  };
  for (const Case& c : {Case{"op_min", "u1=+0.001"}, Case{"op_min", "bs=+0.001"}, Case{"cp_min", "u3=+0.001"},
                        Case{"cp_min", "bq=-0.001"}, Case{"max6", "bz=+0.001"}}) {
    SystemSpec nominal = default_system(c.id);
    SystemSpec perturbed = build_system(c.id, apply_mutation(nominal.params, c.mutation));
    SystemSpec mixed = with_dynamics_of(nominal, perturbed);
    VerifyOptions opt;
    opt.samples = 200;
    VerificationReport rep = verify_system(mixed, opt);
    CHECK_MESSAGE(!rep.pass, c.id, " ", c.mutation);
    bool some_bracket_failed = false;
    for (const auto& r : rep.checks) {
      if (r.check.rfind("{", 0) == 0 && !r.pass) some_bracket_failed = true;
    }
    CHECK_MESSAGE(some_bracket_failed, c.id, " ", c.mutation);
  }
}

TEST_CASE("verification report of a nominal system") {
  for (const auto& id : superintegrable_ids) {
    VerifyOptions opt;
    opt.samples = 300;
    VerificationReport rep = verify_system(default_system(id), opt);
    CHECK_MESSAGE(rep.pass, id);
    auto j = rep.to_json();
    CHECK(j["system_id"] == id);
    CHECK(j["seed"] == default_seed);
    CHECK(j["checks"].is_array());
  }
  // Same seed, same numbers.
  VerifyOptions opt;
  opt.samples = 100;
  auto a = verify_system(default_system("cp_min"), opt).to_json();
  auto b = verify_system(default_system("cp_min"), opt).to_json();
  CHECK(a == b);
}
