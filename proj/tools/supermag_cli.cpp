#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "supermag/dynamics.hpp"
#include "supermag/errors.hpp"
#include "supermag/io.hpp"
#include "supermag/systems.hpp"
#include "supermag/verify.hpp"

namespace fs = std::filesystem;
using namespace supermag;

namespace {

enum Exit { ok = 0, verification_failed = 1, config_error = 2, singular_abort = 3 };

SystemParams params_for(const std::string& id, const std::optional<std::string>& text) {
  const CatalogEntry& e = catalog_entry(id);
  return SystemParams::parse(text ? *text : e.default_params);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("out", "cannot write " + path.string());
  f << text;
}

int cmd_list(const std::string& id, bool json) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : catalog()) {
    if (!id.empty() && e.id != id) continue;
    nlohmann::json integrals = nlohmann::json::array();
    for (const auto& [label, order] : e.integrals) integrals.push_back({{"label", label}, {"momentum_order", order}});
    out.push_back({{"id", e.id},
                   {"equation", e.equation_tag},
                   {"parameters", e.parameters},
                   {"claimed_rank", e.claimed_rank},
                   {"integrals", integrals},
                   {"serializable", e.serializable},
                   {"default_params", e.default_params}});
  }
  if (!id.empty() && out.empty()) catalog_entry(id);  // throws with the offending id
  if (json) {
    std::cout << out.dump(2) << '\n';
    return ok;
  }
  for (const auto& e : out) {
    std::cout << e["id"].get<std::string>() << "  [" << e["equation"].get<std::string>() << "]  rank "
              << e["claimed_rank"].get<int>() << "\n  parameters:";
    for (const auto& p : e["parameters"]) std::cout << ' ' << p.get<std::string>();
    std::cout << "\n  integrals:";
    for (const auto& g : e["integrals"]) {
      std::cout << ' ' << g["label"].get<std::string>() << " (order " << g["momentum_order"].get<std::string>() << ")";
    }
    std::cout << '\n';
  }
  return ok;
}

struct VerifyArgs {
  std::string id;
  std::optional<std::string> params;
  std::optional<std::string> mutate;
  std::uint64_t seed = default_seed;
  int samples = 1000;
  std::optional<std::string> out;
  bool json = false;
};

int cmd_verify(const VerifyArgs& a) {
  SystemParams p = params_for(a.id, a.params);
  SystemSpec spec = build_system(a.id, p);
  if (a.mutate) spec = with_dynamics_of(spec, build_system(a.id, apply_mutation(p, *a.mutate)));
  VerifyOptions opt;
  opt.seed = a.seed;
  opt.samples = a.samples;
  VerificationReport rep = verify_system(spec, opt);
  nlohmann::json j = rep.to_json();
  j["params"] = spec.params.to_json();
  if (a.mutate) j["mutation"] = *a.mutate;
  if (a.out) write_text(fs::path(*a.out) / (a.id + "_verify.json"), j.dump(2) + "\n");
  if (a.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& c : rep.checks) {
      std::printf("%-4s %-36s max %.3e  (tol %.0e, %d samples)\n", c.pass ? "ok" : "FAIL", c.check.c_str(),
                  c.max_residual, c.tolerance, c.samples);
    }
    std::printf("rank %d (claimed %d, %d/%d points agree)\n", rep.rank.majority_rank, rep.claimed_rank,
                rep.rank.agreeing, rep.rank.points);
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
  }
  return rep.pass ? ok : verification_failed;
}

struct SimulateArgs {
  std::string id;
  std::optional<std::string> params;
  std::string ic = "1,-1,1,1,0,0";
  double t_end = 50.0;
  double tol = 1e-12;
  bool detect = false;
  std::string momenta = "canonical";
  std::uint64_t seed = default_seed;
  std::string out = "out";
  bool json = false;
};

int cmd_simulate(const SimulateArgs& a) {
  SystemSpec spec = build_system(a.id, params_for(a.id, a.params));
  MomentumInterpretation mi = parse_momentum_interpretation(a.momenta);
  PhasePoint given = parse_initial_state(a.ic);
  PhasePoint ic = canonical_initial_state(spec, given, mi);
  IntegrateOptions io;
  io.tol = a.tol;
  Trajectory traj = integrate(spec, ic, a.t_end, io);
  nlohmann::json meta = trajectory_meta(traj, mi, given, a.seed);
  if (a.detect) {
    PeriodOptions po;
    po.tol = a.tol;
    meta["period"] = detect_period(traj, po).to_json();
  }
  fs::path dir(a.out);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_text(dir / (a.id + ".csv"), csv.str());
  write_text(dir / (a.id + "_meta.json"), meta.dump(2) + "\n");
  if (a.json) {
    std::cout << meta.dump(2) << '\n';
  } else {
    std::cout << "wrote " << (dir / (a.id + ".csv")).string() << " (" << traj.times.size() << " samples)\n";
    if (meta.contains("drift")) std::cout << "drift " << meta["drift"].dump() << '\n';
    if (meta.contains("period")) std::cout << "period " << meta["period"].dump() << '\n';
  }
  return ok;
}

int cmd_figure(int id, const std::string& out, const std::string& momenta, bool json) {
  FigureResult r = run_figure(id, out, parse_momentum_interpretation(momenta));
  if (json) {
    std::cout << r.to_json().dump(2) << '\n';
    return ok;
  }
  std::cout << "figure " << id << ": " << r.recipe.system_id << " " << r.recipe.params << '\n';
  std::cout << "period " << r.period.to_json().dump() << '\n';
  for (const auto& f : r.files) std::cout << "  " << f.string() << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superintegrable charged-particle systems: catalog, verification, simulation, figures"};
  app.require_subcommand(1);

  std::string list_id;
  bool list_json = false;
  auto* list = app.add_subcommand("list", "List catalog systems");
  list->add_option("id", list_id, "Show a single system");
  list->add_flag("--json", list_json, "Machine-readable output");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the bracket, rank, closure and determining-equation suites");
  verify->add_option("id", va.id, "System id")->required();
  verify->add_option("--params", va.params, "k=v,... (fractions allowed)");
  verify->add_option("--mutate", va.mutate, "Perturb the Hamiltonian only: k=+d or k=-d (delta), k=v (absolute)");
  verify->add_option("--seed", va.seed, "Sampling seed");
  verify->add_option("--samples", va.samples, "Random points per bracket check")->check(CLI::PositiveNumber);
  verify->add_option("--out", va.out, "Directory for the JSON report");
  verify->add_flag("--json", va.json, "Print the JSON report");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Integrate a trajectory and export CSV + meta JSON");
  simulate->add_option("id", sa.id, "System id")->required();
  simulate->add_option("--params", sa.params, "k=v,...");
  simulate->add_option("--ic", sa.ic, "x,y,z,px,py,pz");
  simulate->add_option("--t-end", sa.t_end, "Final time");
  simulate->add_option("--tol", sa.tol, "Per-step error tolerance in [1e-14, 1e-6]");
  simulate->add_flag("--detect-period", sa.detect, "Search for a phase-space return");
  simulate->add_option("--momenta", sa.momenta, "canonical|kinetic interpretation of the IC momenta");
  simulate->add_option("--seed", sa.seed, "Recorded in meta");
  simulate->add_option("--out", sa.out, "Output directory");
  simulate->add_flag("--json", sa.json, "Print meta JSON");

  int fig_id = 0;
  std::string fig_out = "figures";
  std::string fig_momenta = "canonical";
  bool fig_json = false;
  auto* figure = app.add_subcommand("figure", "Reproduce a reference figure (1..6)");
  figure->add_option("id", fig_id, "Figure id")->required();
  figure->add_option("--out", fig_out, "Output directory");
  figure->add_option("--momenta", fig_momenta, "canonical|kinetic");
  figure->add_flag("--json", fig_json, "Print the figure report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (list->parsed()) return cmd_list(list_id, list_json);
    if (verify->parsed()) return cmd_verify(va);
    if (simulate->parsed()) return cmd_simulate(sa);
    if (figure->parsed()) return cmd_figure(fig_id, fig_out, fig_momenta, fig_json);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    std::cerr << "config error [domain]: " << e.what() << '\n';
    return config_error;
  } catch (const SingularApproach& e) {
    std::cerr << "singular approach at t=" << e.time() << ": " << e.what() << '\n';
    return singular_abort;
  }
  return ok;
}
