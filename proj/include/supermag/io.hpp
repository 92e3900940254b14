#ifndef SUPERMAG_IO_HPP
#define SUPERMAG_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "supermag/dynamics.hpp"
#include "supermag/sampling.hpp"
#include "supermag/systems.hpp"

namespace supermag {

enum class MomentumInterpretation { canonical, kinetic };

const char* to_string(MomentumInterpretation m);
// Throws ConfigError("momenta") for anything but "canonical" or "kinetic".
MomentumInterpretation parse_momentum_interpretation(std::string_view text);

// Canonical momenta for an initial condition given under `m`: kinetic input
// p + A(q) is shifted back by A(q).
PhasePoint canonical_initial_state(const SystemSpec& spec, const PhasePoint& given, MomentumInterpretation m);

// "x,y,z,px,py,pz" with fractions allowed. Throws ConfigError("ic").
PhasePoint parse_initial_state(std::string_view text);

// Header t,x,y,z,px,py,pz followed by the trace labels; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Sidecar metadata: the integrator metadata plus drift summary, momentum
// interpretation, the IC as given, and the seed.
nlohmann::json trajectory_meta(const Trajectory& traj, MomentumInterpretation m, const PhasePoint& given_ic,
                               std::uint64_t seed);

enum class Projection { xy, xz, yz, iso };
const char* to_string(Projection p);

struct SvgOptions {
  std::string title;
  std::optional<std::string> annotation;
  double t_max = std::numeric_limits<double>::infinity();  // draw samples with t <= t_max
  int color_bins = 128;
};

// Self-contained SVG 1.1 polyline coloured red (t = 0) to blue (t = t_max),
// viewBox fitted to the projected bounding box with a 5% margin.
void write_svg(std::ostream& os, const Trajectory& traj, Projection proj, const SvgOptions& opt);

struct FigureRecipe {
  int id = 0;
  std::string system_id;
  std::string params;  // as stated for the figure
  PhasePoint ic;
  std::vector<double> horizons;         // sub-figure time windows
  std::optional<double> closure_time;   // stated closure time
  std::string closure_label;            // "8 pi", "18.85", ...
  bool closure_exact = false;           // "at" rather than "around"
};

// The six reference figure recipes. Throws ConfigError("figure") for other ids.
const FigureRecipe& figure_recipe(int id);
const std::vector<FigureRecipe>& figure_recipes();

// Horizon over which period detection runs for a recipe: twice the stated
// closure time, or 200 for non-closing figures.
double detection_horizon(const FigureRecipe& r);

struct FigureResult {
  FigureRecipe recipe;
  PeriodReport period;
  std::vector<std::filesystem::path> files;
  nlohmann::json to_json() const;
};

// Integrates the recipe, detects the period, writes CSV, meta, report and
// SVG projections into `dir`.
FigureResult run_figure(int id, const std::filesystem::path& dir,
                        MomentumInterpretation m = MomentumInterpretation::canonical);

}  // namespace supermag

#endif  // SUPERMAG_IO_HPP
