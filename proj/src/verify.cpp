#include "supermag/verify.hpp"

#include <algorithm>

namespace supermag {

namespace {

CounterRng stream(std::uint64_t seed, std::uint64_t k) { return CounterRng(seed + 0x9E3779B97F4A7C15ULL * k); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) checks_json.push_back(c.to_json());
  return {{"system_id", system_id},
          {"seed", seed},
          {"checks", checks_json},
          {"rank", {{"claimed", claimed_rank}, {"majority", rank.majority_rank}, {"agreeing", rank.agreeing},
                    {"points", rank.points}}},
          {"pass", pass}};
}

VerificationReport verify_system(const SystemSpec& spec, const VerifyOptions& opt) {
  VerificationReport rep;
  rep.system_id = spec.id;
  rep.seed = opt.seed;
  rep.claimed_rank = spec.claimed_rank;

  std::uint64_t k = 0;
  for (const auto& g : spec.integrals) {
    CounterRng rng = stream(opt.seed, ++k);
    rep.checks.push_back(is_integral(spec, g, opt.samples, opt.bracket_tol, rng));
  }
  for (const auto& [a, b] : spec.involutions) {
    CounterRng rng = stream(opt.seed, ++k);
    rep.checks.push_back(involution(spec, a, b, opt.samples, opt.bracket_tol, rng));
  }
  {
    CounterRng rng = stream(opt.seed, 100);
    rep.rank = rank_vote(spec, opt.rank_points, rng);
    CheckReport r;
    r.system_id = spec.id;
    r.check = "rank";
    r.samples = opt.rank_points;
    r.max_residual = std::abs(rep.rank.majority_rank - spec.claimed_rank);
    r.mean_residual = r.max_residual;
    r.tolerance = 0.5;
    r.pass = rep.rank.majority_rank == spec.claimed_rank;
    rep.checks.push_back(r);
  }
  if (spec.closure) {
    CounterRng rng = stream(opt.seed, 101);
    rep.checks.push_back(closure_report(spec, opt.samples, opt.closure_tol, rng).summary);
  }
  if (!spec.decompositions.empty()) {
    auto grid = safe_grid(opt.grid_n);
    for (const auto& [label, ansatz] : spec.decompositions) {
      DeterminingResiduals d = determining_residuals(ansatz, spec.B, spec.W, grid);
      CheckReport r;
      r.system_id = spec.id;
      r.check = "determining equations for " + label;
      r.samples = d.points;
      r.max_residual = *std::max_element(d.tier.begin(), d.tier.end());
      r.mean_residual = r.max_residual;
      r.tolerance = opt.determining_tol;
      r.pass = r.max_residual < opt.determining_tol;
      rep.checks.push_back(r);
    }
  }
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckReport& c) { return c.pass; });
  return rep;
}

SystemSpec with_dynamics_of(const SystemSpec& nominal, const SystemSpec& perturbed) {
  SystemSpec out = nominal;
  out.hamiltonian = perturbed.hamiltonian;
  out.W = perturbed.W;
  out.A = perturbed.A;
  out.B = perturbed.B;
  out.params = perturbed.params;
  return out;
}

SystemParams apply_mutation(const SystemParams& base, std::string_view mutation) {
  SystemParams out = base;
  while (!mutation.empty()) {
    auto comma = mutation.find(',');
    std::string_view item = trim(mutation.substr(0, comma));
    mutation = comma == std::string_view::npos ? std::string_view{} : mutation.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError(std::string(item), "expected key=value or key=+delta");
    std::string key(trim(item.substr(0, eq)));
    std::string_view value = trim(item.substr(eq + 1));
    if (value.empty()) throw ConfigError(key, "empty value");
    double sign = 0.0;
    if (value.front() == '+' || value.front() == '-') {
      sign = value.front() == '+' ? 1.0 : -1.0;
      value.remove_prefix(1);
    }
    double v = SystemParams::parse(key + "=" + std::string(value)).get(key);
    out.set(key, sign == 0.0 ? v : out.get(key) + sign * v);
  }
  return out;
}

}  // namespace supermag
