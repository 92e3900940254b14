#include "supermag/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace supermag {

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::array<double, 2> project(Projection proj, const Vec3<double>& q) {
  switch (proj) {
    case Projection::xy:
      return {q[0], q[1]};
    case Projection::xz:
      return {q[0], q[2]};
    case Projection::yz:
      return {q[1], q[2]};
    case Projection::iso: {
      // Azimuth 45 degrees, elevation 30 degrees.
      const double ca = std::numbers::sqrt2 / 2.0;
      const double se = 0.5;
      const double ce = std::sqrt(3.0) / 2.0;
      double u = ca * (q[0] - q[1]);
      double v = ce * q[2] - se * ca * (q[0] + q[1]);
      return {u, v};
    }
  }
  return {0.0, 0.0};
}

std::array<const char*, 2> axis_names(Projection proj) {
  switch (proj) {
    case Projection::xy:
      return {"x", "y"};
    case Projection::xz:
      return {"x", "z"};
    case Projection::yz:
      return {"y", "z"};
    case Projection::iso:
      break;
  }
  return {"", ""};
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("out", "cannot write " + path.string());
  f << text;
}

}  // namespace

const char* to_string(MomentumInterpretation m) {
  return m == MomentumInterpretation::canonical ? "canonical" : "kinetic";
}

MomentumInterpretation parse_momentum_interpretation(std::string_view text) {
  if (text == "canonical") return MomentumInterpretation::canonical;
  if (text == "kinetic") return MomentumInterpretation::kinetic;
  throw ConfigError("momenta", "expected canonical or kinetic, got '" + std::string(text) + "'");
}

PhasePoint canonical_initial_state(const SystemSpec& spec, const PhasePoint& given, MomentumInterpretation m) {
  if (m == MomentumInterpretation::canonical) return given;
  Vec3<double> A = spec.A(given.q);
  PhasePoint s = given;
  for (int i = 0; i < 3; ++i) s.p[i] -= A[i];
  return s;
}

PhasePoint parse_initial_state(std::string_view text) {
  std::array<double, 6> v{};
  static const char* names[6] = {"x", "y", "z", "px", "py", "pz"};
  std::size_t pos = 0;
  for (int k = 0; k < 6; ++k) {
    auto comma = text.find(',', pos);
    if ((comma == std::string_view::npos) != (k == 5)) throw ConfigError("ic", "expected six comma-separated values");
    std::string item(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    try {
      v[k] = SystemParams::parse("u1=" + item).u1;
    } catch (const ConfigError&) {
      throw ConfigError("ic", std::string("cannot parse ") + names[k] + " value '" + item + "'");
    }
    pos = comma + 1;
  }
  try {
    return make_phase_point({v[0], v[1], v[2]}, {v[3], v[4], v[5]});
  } catch (const EvaluationError&) {
    throw ConfigError("ic", "non-finite component");
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,y,z,px,py,pz";
  for (const auto& l : traj.trace_labels) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& s = traj.states[i];
    os << num17(traj.times[i]);
    for (double v : s.q) os << ',' << num17(v);
    for (double v : s.p) os << ',' << num17(v);
    for (const auto& tr : traj.traces) os << ',' << num17(tr[i]);
    os << '\n';
  }
}

nlohmann::json trajectory_meta(const Trajectory& traj, MomentumInterpretation m, const PhasePoint& given_ic,
                               std::uint64_t seed) {
  nlohmann::json j = traj.meta;
  j["momentum_interpretation"] = to_string(m);
  j["ic_as_given"] = {given_ic.q[0], given_ic.q[1], given_ic.q[2], given_ic.p[0], given_ic.p[1], given_ic.p[2]};
  const auto& s0 = traj.states.front();
  j["ic_canonical"] = {s0.q[0], s0.q[1], s0.q[2], s0.p[0], s0.p[1], s0.p[2]};
  j["seed"] = seed;
  j["samples"] = traj.times.size();
  if (!traj.trace_labels.empty()) j["drift"] = traj.drift_summary();
  return j;
}

const char* to_string(Projection p) {
  switch (p) {
    case Projection::xy:
      return "xy";
    case Projection::xz:
      return "xz";
    case Projection::yz:
      return "yz";
    case Projection::iso:
      return "3d";
  }
  return "?";
}

void write_svg(std::ostream& os, const Trajectory& traj, Projection proj, const SvgOptions& opt) {
  std::size_t n = 0;
  while (n < traj.times.size() && traj.times[n] <= opt.t_max) ++n;
  std::vector<std::array<double, 2>> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(project(proj, traj.states[i].q));

  double umin = INFINITY, umax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& p : pts) {
    umin = std::min(umin, p[0]);
    umax = std::max(umax, p[0]);
    vmin = std::min(vmin, p[1]);
    vmax = std::max(vmax, p[1]);
  }
  if (pts.empty()) umin = umax = vmin = vmax = 0.0;
  double w = std::max(umax - umin, 1e-9);
  double h = std::max(vmax - vmin, 1e-9);
  const double mu = 0.05 * w;
  const double mv = 0.05 * h;
  const double headroom = 0.12 * std::max(w, h);  // title and annotation band
  const double vx = umin - mu;
  const double vy = -(vmax + mv) - headroom;
  const double vw = w + 2.0 * mu;
  const double vh = h + 2.0 * mv + headroom;
  const double stroke = 0.004 * std::max(vw, vh);
  const double font = 0.035 * std::max(vw, vh);

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
     << static_cast<int>(std::lround(800.0 * vh / vw)) << "\" viewBox=\"" << num6(vx) << ' ' << num6(vy) << ' '
     << num6(vw) << ' ' << num6(vh) << "\">\n";
  os << "<rect x=\"" << num6(vx) << "\" y=\"" << num6(vy) << "\" width=\"" << num6(vw) << "\" height=\"" << num6(vh)
     << "\" fill=\"white\"/>\n";
  os << "<g fill=\"none\" stroke-width=\"" << num6(stroke) << "\" stroke-linejoin=\"round\" stroke-linecap=\"round\">\n";
  if (n >= 2) {
    const double t0 = traj.times.front();
    const double t1 = traj.times[n - 1];
    const int bins = std::max(1, opt.color_bins);
    std::size_t start = 0;
    for (int b = 0; b < bins && start + 1 < n; ++b) {
      const double t_hi = t0 + (t1 - t0) * static_cast<double>(b + 1) / bins;
      std::size_t end = start + 1;
      while (end + 1 < n && traj.times[end] < t_hi) ++end;
      const double frac = (static_cast<double>(b) + 0.5) / bins;
      const int red = static_cast<int>(std::lround(255.0 * (1.0 - frac)));
      const int blue = static_cast<int>(std::lround(255.0 * frac));
      char color[16];
      std::snprintf(color, sizeof color, "#%02x00%02x", red, blue);
      os << "<polyline stroke=\"" << color << "\" points=\"";
      for (std::size_t i = start; i <= end; ++i) {
        os << num6(pts[i][0]) << ',' << num6(-pts[i][1]) << (i == end ? "" : " ");
      }
      os << "\"/>\n";
      start = end;
    }
  }
  os << "</g>\n";
  const auto axes = axis_names(proj);
  std::string heading = opt.title;
  if (axes[0][0] != '\0') heading += std::string(" (") + axes[0] + axes[1] + " projection)";
  os << "<text x=\"" << num6(vx + 0.02 * vw) << "\" y=\"" << num6(vy + 1.2 * font) << "\" font-family=\"sans-serif\" font-size=\""
     << num6(font) << "\">" << xml_escape(heading) << "</text>\n";
  if (opt.annotation) {
    os << "<text x=\"" << num6(vx + 0.02 * vw) << "\" y=\"" << num6(vy + 2.5 * font)
       << "\" font-family=\"sans-serif\" font-size=\"" << num6(0.8 * font) << "\">" << xml_escape(*opt.annotation)
       << "</text>\n";
  }
  os << "</svg>\n";
}

const std::vector<FigureRecipe>& figure_recipes() {
  static const std::vector<FigureRecipe> recipes = [] {
    const PhasePoint ic{{1.0, -1.0, 1.0}, {1.0, 0.0, 0.0}};
    const double pi = std::numbers::pi;
    std::vector<FigureRecipe> r;
    r.push_back({1, "op_min", "u1=2,u2=3/2,u3=-1,bz=7,bp=4,bs=2", ic, {2.0, 7.0, 50.0}, std::nullopt, "", false});
    r.push_back({2, "op_min", "u1=1,u2=3/2,u3=-1,bz=2,bp=4,bs=2", ic, {18.85}, 18.85, "18.85", false});
    r.push_back({3, "max5", "u2=3/2,bz=2,n=3,m=2", ic, {8.0 * pi}, 8.0 * pi, "8 pi", true});
    r.push_back({4, "cp_min", "u1=10,u2=3/2,u3=1,bz=2,bq=4", ic, {50.0}, std::nullopt, "", false});
    r.push_back({5, "cp_min", "u1=1,u2=3/2,u3=1/2,bz=4,bq=0", ic, {12.57}, 12.57, "12.57", false});
    r.push_back({6, "max6", "bz=3,n=1,m=2", ic, {8.0 * pi / 3.0}, 8.0 * pi / 3.0, "8 pi/3", true});
    return r;
  }();
  return recipes;
}

const FigureRecipe& figure_recipe(int id) {
  for (const auto& r : figure_recipes()) {
    if (r.id == id) return r;
  }
  throw ConfigError("figure", "expected an id in 1..6, got " + std::to_string(id));
}

double detection_horizon(const FigureRecipe& r) { return r.closure_time ? 2.0 * *r.closure_time : 200.0; }

nlohmann::json FigureResult::to_json() const {
  nlohmann::json files_json = nlohmann::json::array();
  for (const auto& f : files) files_json.push_back(f.filename().string());
  nlohmann::json j{{"figure", recipe.id},
                   {"system_id", recipe.system_id},
                   {"params", recipe.params},
                   {"detection_horizon", detection_horizon(recipe)},
                   {"period", period.to_json()},
                   {"files", files_json}};
  j["stated_closure"] = recipe.closure_time ? nlohmann::json(*recipe.closure_time) : nlohmann::json(nullptr);
  return j;
}

FigureResult run_figure(int id, const std::filesystem::path& dir, MomentumInterpretation m) {
  const FigureRecipe& recipe = figure_recipe(id);
  FigureResult res;
  res.recipe = recipe;
  SystemSpec spec = build_system(recipe.system_id, SystemParams::parse(recipe.params));
  PhasePoint ic = canonical_initial_state(spec, recipe.ic, m);

  res.period = detect_period(spec, ic, detection_horizon(recipe));

  std::vector<double> horizons = recipe.horizons;
  if (recipe.closure_time && res.period.closed) horizons.back() = *res.period.period;
  IntegrateOptions io;
  Trajectory traj = integrate(spec, ic, horizons.back(), io);

  std::filesystem::create_directories(dir);
  const std::string stem = "figure" + std::to_string(id);
  auto emit = [&](const std::string& name, const std::string& text) {
    auto path = dir / name;
    write_file(path, text);
    res.files.push_back(path);
  };
  {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    emit(stem + ".csv", csv.str());
    emit(stem + "_meta.json", trajectory_meta(traj, m, recipe.ic, default_seed).dump(2) + "\n");
  }

  std::optional<std::string> note;
  if (recipe.closure_time) {
    std::string stated = std::string(recipe.closure_exact ? "closes at t = " : "closes around t = ") + recipe.closure_label;
    if (res.period.closed) {
      note = stated + "; measured " + num6(*res.period.period);
    } else {
      note = stated + "; no return within tolerance (nearest " + num6(res.period.return_distance) + ")";
    }
  }
  const std::string title = "Figure " + std::to_string(id) + ": " + recipe.system_id;
  for (Projection p : {Projection::xy, Projection::xz, Projection::yz, Projection::iso}) {
    SvgOptions so;
    so.title = title + ", t in [0, " + num6(horizons.back()) + "]";
    so.annotation = note;
    std::ostringstream svg;
    write_svg(svg, traj, p, so);
    emit(stem + "_" + to_string(p) + ".svg", svg.str());
  }
  for (std::size_t k = 0; k + 1 < horizons.size(); ++k) {
    SvgOptions so;
    so.title = title + ", t in [0, " + num6(horizons[k]) + "]";
    so.t_max = horizons[k];
    std::ostringstream svg;
    write_svg(svg, traj, Projection::iso, so);
    emit(stem + "_3d_t" + num6(horizons[k]) + ".svg", svg.str());
  }
  emit(stem + "_report.json", res.to_json().dump(2) + "\n");
  return res;
}

}  // namespace supermag
