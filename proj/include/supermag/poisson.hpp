#ifndef SUPERMAG_POISSON_HPP
#define SUPERMAG_POISSON_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "supermag/field.hpp"
#include "supermag/sampling.hpp"
#include "supermag/systems.hpp"

namespace supermag {

// {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i) at derivative level T.
template <class T>
T poisson_at(const Observable& f, const Observable& g, const Phase<T>& s) {
  auto a = gradient_at(f, s);
  auto b = gradient_at(g, s);
  T sum(0.0);
  for (int i = 0; i < 3; ++i) sum = sum + a[i] * b[3 + i] - a[3 + i] * b[i];
  return sum;
}

double poisson(const Observable& f, const Observable& g, const PhasePoint& s);

// |{f, g}| / (|grad f| |grad g|); the raw value when either gradient vanishes.
double normalized_bracket(const Observable& f, const Observable& g, const PhasePoint& s);

// {f, g} as an observable; differentiable once more (enough for Jacobi).
Observable bracket_observable(const Observable& f, const Observable& g);
Observable product_observable(const Observable& f, const Observable& g);

// One verification result: {system_id, check, samples, max_residual,
// tolerance, pass} plus the mean.
struct CheckReport {
  std::string system_id;
  std::string check;
  int samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Point filter for a system: every observable of the system must evaluate finitely.
bool evaluable_at(const SystemSpec& spec, const PhasePoint& s);
PhasePoint sample_for(const SystemSpec& spec, CounterRng& rng);

CheckReport is_integral(const SystemSpec& spec, const Observable& g, int samples, double tol, CounterRng& rng);
CheckReport involution(const SystemSpec& spec, const std::string& a, const std::string& b, int samples, double tol,
                       CounterRng& rng);

struct RankResult {
  int rank = 0;
  std::vector<double> singular_values;
};

// Numerical rank of the k x 6 gradient matrix, threshold 1e-8 sigma_max.
// Rows are scaled to unit length first (rank-preserving), since a high-order
// Y4 can have a gradient many orders larger than that of H.
RankResult functional_rank(const std::vector<Observable>& observables, const PhasePoint& s);
inline constexpr double rank_threshold = 1e-8;

struct RankVote {
  int majority_rank = 0;
  int agreeing = 0;
  int points = 0;
  std::vector<int> ranks;
};

// H followed by all integrals of the system, at `points` random safe points.
RankVote rank_vote(const SystemSpec& spec, int points, CounterRng& rng);

// Max absolute residual of the third-, second-, first- and zeroth-order
// determining equations (index 0..3) over the grid.
struct DeterminingResiduals {
  std::array<double, 4> tier{};
  int points = 0;
};

DeterminingResiduals determining_residuals(const QuadraticAnsatz& ansatz, const TwoForm& B, const ScalarField& W,
                                           const std::vector<Vec3<double>>& grid);

// The Hamiltonian itself as an ansatz: f_ii = 1/2, s = 0, m = W.
QuadraticAnsatz hamiltonian_ansatz(const ScalarField& W);

struct ClosureEntry {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(1, |lhs|, |rhs|)
};

struct ClosureOptions {
  std::optional<int> flip_term;  // negate one polynomial term (negative control)
  bool literal_sign = false;     // ignore the polynomial's lhs_sign
};

// Both sides are evaluated in extended precision: the op_min terms reach
// 1e8 while their sum stays O(1), beyond what double keeps to 1e-9.
ClosureEntry closure_residual(const SystemSpec& spec, const PhasePoint& s, const ClosureOptions& opt = {});

struct ClosureReport {
  std::vector<ClosureEntry> entries;
  CheckReport summary;
};

ClosureReport closure_report(const SystemSpec& spec, int samples, double tol, CounterRng& rng,
                             const ClosureOptions& opt = {});

}  // namespace supermag

#endif  // SUPERMAG_POISSON_HPP
