#ifndef SUPERMAG_SYSTEMS_HPP
#define SUPERMAG_SYSTEMS_HPP

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supermag/coords.hpp"
#include "supermag/field.hpp"
#include "supermag/forms.hpp"
#include "supermag/params.hpp"

namespace supermag {

// X = sum_{i<=j} f_ij p^A_i p^A_j + sum_i s_i p^A_i + m. Index order of f is
// (11, 22, 33, 12, 13, 23).
struct QuadraticAnsatz {
  std::array<ScalarField, 6> f;
  std::array<ScalarField, 3> s;
  ScalarField m0;
};

// Right-hand side of a polynomial closure relation {X1,Y3}^2 = P(H,X1,X2,Y3),
// returned term by term so a single term can be mutated in negative controls.
struct ClosurePolynomial {
  std::string lhs_first;   // label of the first bracket argument
  std::string lhs_second;  // label of the second bracket argument
  // The identity checked is lhs_sign * {first,second}^2 = P. It is -1 for
  // CPHmin, whose printed right-hand side equals minus the squared bracket.
  double lhs_sign = 1.0;
  std::function<std::vector<LD>(LD H, LD X1, LD X2, LD Y3)> terms;
};

// Support for the complex-product integral Y4 = Re(F^a G^b): per-factor
// moduli and factories for rescaled versions.
struct ComplexIntegral {
  // |F| and |G| at a point.
  std::function<std::array<double, 2>(const PhasePoint&)> factor_moduli;
  // Y4 with each factor divided by the given scale.
  std::function<Observable(double f_scale, double g_scale)> scaled;
  // The printed explicit m = n = 1 polynomial, when the system has one.
  std::optional<Observable> explicit_unit_form;
  int factor_f_power = 0;
  int factor_g_power = 0;
};

struct SystemSpec {
  std::string id;
  std::string equation_tag;
  SystemParams params;
  ScalarField W;
  CovectorField A;
  TwoForm B;
  Observable hamiltonian;
  std::vector<Observable> integrals;
  int claimed_rank = 3;
  bool serializable = true;
  bool singular_r = false;  // potential or chart singular on the z-axis
  bool singular_z = false;  // singular on the plane z = 0
  // Claimed vanishing brackets among integrals (besides those with H).
  std::vector<std::pair<std::string, std::string>> involutions;
  std::map<std::string, QuadraticAnsatz> decompositions;
  std::optional<ClosurePolynomial> closure;
  std::optional<ComplexIntegral> y4;

  const Observable& integral(std::string_view label) const;
  bool has_integral(std::string_view label) const;
  // Returns a copy whose Y4 factors are scaled to unit modulus at s0.
  SystemSpec with_y4_normalized_at(const PhasePoint& s0) const;
  nlohmann::json to_json() const;
};

// Builds the observable of a quadratic ansatz in the covariant momenta of A.
Observable ansatz_observable(const std::string& label, const QuadraticAnsatz& ansatz, const CovectorField& A);

// The constant field B = bz dx^dy in the symmetric gauge.
CovectorField symmetric_constant_potential(double bz);

SystemSpec build_free_particle();
SystemSpec build_linear_min(const SystemParams& p);
SystemSpec build_linear_max(const SystemParams& p);
SystemSpec build_op_min(const SystemParams& p);
SystemSpec build_cp_min(const SystemParams& p);
SystemSpec build_cp_bl(const SystemParams& p);
SystemSpec build_cp_general(const SystemParams& p);
SystemSpec build_max5(const SystemParams& p);
SystemSpec build_max6(const SystemParams& p);

// Integrable families with arbitrary one-variable functions: beta1(eta),
// beta2(xi) enter the field, rho1(eta), rho2(xi) only the potential.
struct IntegrableFamily {
  ChartKind kind = ChartKind::circular_parabolic;
  UnivariateFn beta1;
  UnivariateFn beta2;
  UnivariateFn rho1;
  UnivariateFn rho2;
  double a = 1.0;
};

UnivariateFn zero_function();
// c0 + c1 t + c2 t^2 + ...
UnivariateFn polynomial_function(std::vector<double> coefficients);

SystemSpec build_family(const IntegrableFamily& family);

// The printed curvilinear Hamiltonian, evaluated through the chart (an
// independent expression for the system's H).
Observable family_printed_hamiltonian(const IntegrableFamily& family);

// Choices of beta1, beta2 giving the constant field B = (0, 0, bz).
IntegrableFamily constant_field_family(ChartKind kind, double bz, double a = 1.0);

// The family's magnetic field from the printed curvilinear components,
// converted to Cartesian 2-form coefficients (independent of dA).
TwoForm family_printed_field(const IntegrableFamily& family);

struct CatalogEntry {
  std::string id;
  std::string equation_tag;
  std::vector<std::string> parameters;
  int claimed_rank;
  std::vector<std::pair<std::string, std::string>> integrals;  // label, momentum order
  bool serializable;
  std::string default_params;  // used when no --params are given
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(std::string_view id);

// Builds any serializable catalog system, or a family with default
// functions for the family ids. Throws ConfigError for unknown ids.
SystemSpec build_system(std::string_view id, const SystemParams& p);

}  // namespace supermag

#endif  // SUPERMAG_SYSTEMS_HPP
