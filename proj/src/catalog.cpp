#include <algorithm>

#include "supermag/systems.hpp"

namespace supermag {

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"op_min", "OPHmin", {"u1", "u2", "u3", "bz", "bp", "bs"}, 4, {{"X1", "2"}, {"X2", "1"}, {"Y3", "2"}}, true,
       "u1=2,u2=3/2,u3=-1,bz=7,bp=4,bs=2"},
      {"cp_min", "CPHmin", {"u1", "u2", "u3", "bz", "bq"}, 4, {{"X1", "2"}, {"X2", "1"}, {"Y3", "2"}}, true, "u1=10,u2=3/2,u3=1,bz=2,bq=4"},
      {"cp_general", "Hgen", {"u1", "u2", "u3", "bz", "bl", "bq"}, 4, {{"X1", "2"}, {"X2", "1"}, {"Y3", "2"}}, true, "u1=1,u2=3/2,u3=1,bz=2,bl=1,bq=4"},
      {"cp_bl", "Hgen, b_q = 0", {"u1", "u2", "u3", "bl"}, 4, {{"X1", "2"}, {"X2", "1"}, {"Y3", "2"}}, true, "u1=1,u2=3/2,u3=1/2,bl=1"},
      {"max5",
       "MaxHam5",
       {"u2", "bz", "n", "m"},
       5,
       {{"X1", "2"}, {"X2", "1"}, {"Y3", "2"}, {"Y4", "2(n+2m)"}},
       true, "u2=3/2,bz=2,n=3,m=2"},
      {"max6", "MaxHam6", {"bz", "n", "m"}, 5, {{"X1", "2"}, {"X2", "1"}, {"Y3", "2"}, {"Y4", "2n+m"}}, true, "bz=3,n=1,m=2"},
      {"linear_min", "Sec43", {"u1", "bz"}, 4, {{"X1", "2"}, {"X2", "1"}, {"Y3", "1"}}, true, "u1=1,bz=2"},
      {"linear_max", "Sec43, r^2 -> z^2", {"u1", "bz"}, 5, {{"X1", "2"}, {"X2", "1"}, {"Y3", "1"}, {"Y4", "1"}}, true, "u1=1,bz=2"},
      {"family_cp", "SSecCP", {"beta1(eta)", "beta2(xi)", "rho1(eta)", "rho2(xi)"}, 3, {{"X1", "2"}, {"X2", "1"}},
       false, "bz=1,u1=1,u2=1/2"},
      {"family_oblate", "SSecOS", {"a", "beta1(eta)", "beta2(xi)", "rho1(eta)", "rho2(xi)"}, 3,
       {{"X1", "2"}, {"X2", "1"}}, false, "a=1,bz=1,u1=1,u2=1/2"},
      {"family_prolate", "SSecPS", {"a", "beta1(eta)", "beta2(xi)", "rho1(eta)", "rho2(xi)"}, 3,
       {{"X1", "2"}, {"X2", "1"}}, false, "a=1,bz=1,u1=1,u2=1/2"},
      {"free", "free particle", {}, 3, {{"Lz", "1"}, {"Pz", "1"}}, true, ""},
  };
  return entries;
}

const CatalogEntry& catalog_entry(std::string_view id) {
  const auto& entries = catalog();
  auto it = std::find_if(entries.begin(), entries.end(), [id](const CatalogEntry& e) { return e.id == id; });
  if (it == entries.end()) throw ConfigError("system", "unknown system id '" + std::string(id) + "'");
  return *it;
}

namespace {

// Families from the CLI get the constant-field choice of beta with strength
// bz plus quadratic rho1 = u1 eta^2, rho2 = u2 xi^2.
SystemSpec demo_family(ChartKind kind, const SystemParams& p) {
  IntegrableFamily fam = constant_field_family(kind, p.bz, p.a);
  fam.rho1 = polynomial_function({0.0, 0.0, p.u1});
  fam.rho2 = polynomial_function({0.0, 0.0, p.u2});
  SystemSpec spec = build_family(fam);
  spec.params = p;
  return spec;
}

}  // namespace

SystemSpec build_system(std::string_view id, const SystemParams& p) {
  if (id == "op_min") return build_op_min(p);
  if (id == "cp_min") return build_cp_min(p);
  if (id == "cp_general") return build_cp_general(p);
  if (id == "cp_bl") return build_cp_bl(p);
  if (id == "max5") return build_max5(p);
  if (id == "max6") return build_max6(p);
  if (id == "linear_min") return build_linear_min(p);
  if (id == "linear_max") return build_linear_max(p);
  if (id == "family_cp") return demo_family(ChartKind::circular_parabolic, p);
  if (id == "family_oblate") return demo_family(ChartKind::oblate_spheroidal, p);
  if (id == "family_prolate") return demo_family(ChartKind::prolate_spheroidal, p);
  if (id == "free") return build_free_particle();
  throw ConfigError("system", "unknown system id '" + std::string(id) + "'");
}

}  // namespace supermag
