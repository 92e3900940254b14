#ifndef SUPERMAG_VERIFY_HPP
#define SUPERMAG_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "supermag/poisson.hpp"
#include "supermag/sampling.hpp"
#include "supermag/systems.hpp"

namespace supermag {

struct VerifyOptions {
  std::uint64_t seed = default_seed;
  int samples = 1000;
  int rank_points = 20;
  int grid_n = 5;
  double bracket_tol = 1e-10;
  double closure_tol = 1e-9;
  double determining_tol = 1e-10;
};

struct VerificationReport {
  std::string system_id;
  std::uint64_t seed = 0;
  std::vector<CheckReport> checks;
  RankVote rank;
  int claimed_rank = 0;
  bool pass = false;

  nlohmann::json to_json() const;
};

// Bracket, involution, rank, closure and determining-equation suites. Each
// suite draws from its own stream so results do not depend on which other
// suites a system has.
VerificationReport verify_system(const SystemSpec& spec, const VerifyOptions& opt = {});

// Negative control: the integrals of `nominal` checked against the
// Hamiltonian, potential and field of `perturbed`.
SystemSpec with_dynamics_of(const SystemSpec& nominal, const SystemSpec& perturbed);

// Applies "key=+delta,key=-delta" (or absolute "key=value") to params.
SystemParams apply_mutation(const SystemParams& base, std::string_view mutation);

}  // namespace supermag

#endif  // SUPERMAG_VERIFY_HPP
