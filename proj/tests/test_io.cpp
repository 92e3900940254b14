#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "supermag/io.hpp"
#include "supermag/verify.hpp"

using namespace supermag;
namespace fs = std::filesystem;

namespace {

const PhasePoint reference_ic{{1.0, -1.0, 1.0}, {1.0, 0.0, 0.0}};

std::string csv_of(const Trajectory& tr) {
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("supermag_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("trajectory CSV layout and precision") {
  SystemSpec spec = build_system("op_min", SystemParams::parse("u1=2,u2=3/2,u3=-1,bz=7,bp=4,bs=2"));
  IntegrateOptions opt;
  opt.dt_out = 0.1;
  Trajectory tr = integrate(spec, reference_ic, 1.0, opt);
  std::string text = csv_of(tr);
  std::istringstream is(text);
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,x,y,z,px,py,pz,H,X1,X2,Y3");
  std::string first;
  std::getline(is, first);
  CHECK(first.rfind("0,1,-1,1,1,0,0,", 0) == 0);
  // Every value round-trips exactly.
  std::string line;
  std::size_t rows = 1;
  while (std::getline(is, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    CHECK(std::stod(cell) == tr.times[rows]);
    std::getline(ls, cell, ',');
    CHECK(std::stod(cell) == tr.states[rows].q[0]);
    ++rows;
  }
  CHECK(rows == tr.times.size());
  CHECK(rows == 11);
  // Reruns are bit-identical.
  CHECK(csv_of(integrate(spec, reference_ic, 1.0, opt)) == text);
}

TEST_CASE("trajectory metadata") {
  SystemSpec spec = build_system("max6", SystemParams::parse("bz=3,n=1,m=2"));
  PhasePoint kin{{1.0, -1.0, 1.0}, {1.0, 0.0, 0.0}};
  PhasePoint ic = canonical_initial_state(spec, kin, MomentumInterpretation::kinetic);
  Vec3<double> A = spec.A(kin.q);
  for (int k = 0; k < 3; ++k) CHECK(ic.p[k] + A[k] == doctest::Approx(kin.p[k]).epsilon(1e-15));
  Trajectory tr = integrate(spec, ic, 1.0);
  nlohmann::json meta = trajectory_meta(tr, MomentumInterpretation::kinetic, kin, 99);
  CHECK(meta["momentum_interpretation"] == "kinetic");
  CHECK(meta["seed"] == 99);
  CHECK(meta["ic_as_given"][3] == 1.0);
  CHECK(meta["ic_canonical"][3].get<double>() == ic.p[0]);
  CHECK(meta["drift"].contains("H"));
  CHECK(meta["samples"] == tr.times.size());
  PhasePoint same = canonical_initial_state(spec, kin, MomentumInterpretation::canonical);
  CHECK(same.p[1] == kin.p[1]);
}

TEST_CASE("parsing initial conditions and interpretations") {
  PhasePoint s = parse_initial_state("1,-1,1/2,1,0,0");
  CHECK(s.q[2] == 0.5);
  CHECK(s.p[0] == 1.0);
  for (const char* bad : {"1,2,3", "1,2,3,4,5,6,7", "1,2,x,4,5,6", "1,2,3,4,5,"}) {
    try {
      parse_initial_state(bad);
      FAIL("accepted ", bad);
    } catch (const ConfigError& e) {
      CHECK(e.key() == "ic");
    }
  }
  CHECK(parse_momentum_interpretation("canonical") == MomentumInterpretation::canonical);
  CHECK(parse_momentum_interpretation("kinetic") == MomentumInterpretation::kinetic);
  try {
    parse_momentum_interpretation("mechanical");
    FAIL("accepted mechanical");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "momenta");
  }
}

TEST_CASE("SVG output") {
  SystemSpec spec = build_system("max6", SystemParams::parse("bz=3,n=1,m=2"));
  Trajectory tr = integrate(spec, reference_ic, 3.0);
  for (Projection p : {Projection::xy, Projection::xz, Projection::yz, Projection::iso}) {
    SvgOptions opt;
    opt.title = "a < b & c";
    opt.annotation = "note";
    std::ostringstream os;
    write_svg(os, tr, p, opt);
    std::string svg = os.str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("</svg>\n") == svg.size() - 7);
    CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
    CHECK(svg.find(">note</text>") != std::string::npos);
    // Colour runs from red at t = 0 to blue at the end.
    std::regex stroke("stroke=\"#([0-9a-f]{2})00([0-9a-f]{2})\"");
    std::vector<std::pair<int, int>> colors;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), stroke); it != std::sregex_iterator(); ++it) {
      colors.emplace_back(std::stoi((*it)[1], nullptr, 16), std::stoi((*it)[2], nullptr, 16));
    }
    REQUIRE(colors.size() >= 2);
    CHECK(colors.front().first > 250);
    CHECK(colors.front().second < 5);
    CHECK(colors.back().first < 5);
    CHECK(colors.back().second > 250);
    for (std::size_t i = 1; i < colors.size(); ++i) CHECK(colors[i].second >= colors[i - 1].second);
    int opens = 0, closes = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++opens;
    for (std::size_t pos = 0; (pos = svg.find("\"/>", pos)) != std::string::npos; ++pos) ++closes;
    CHECK(closes == opens + 1);  // polylines plus the background rect
  }
  SvgOptions cut;
  cut.t_max = 1.0;
  std::ostringstream a, b;
  write_svg(a, tr, Projection::xy, cut);
  write_svg(b, tr, Projection::xy, SvgOptions{});
  CHECK(a.str().size() < b.str().size());
}

TEST_CASE("figure recipes") {
  const double pi = std::numbers::pi;
  REQUIRE(figure_recipes().size() == 6);
  struct Want {
    int id;
    const char* system;
    const char* params;
    double closure;
  };
  for (const Want& w : {Want{1, "op_min", "u1=2,u2=3/2,u3=-1,bz=7,bp=4,bs=2", 0.0},
                        Want{2, "op_min", "u1=1,u2=3/2,u3=-1,bz=2,bp=4,bs=2", 18.85},
                        Want{3, "max5", "u2=3/2,bz=2,n=3,m=2", 8.0 * pi},
                        Want{4, "cp_min", "u1=10,u2=3/2,u3=1,bz=2,bq=4", 0.0},
                        Want{5, "cp_min", "u1=1,u2=3/2,u3=1/2,bz=4,bq=0", 12.57},
                        Want{6, "max6", "bz=3,n=1,m=2", 8.0 * pi / 3.0}}) {
    const FigureRecipe& r = figure_recipe(w.id);
    CHECK(r.system_id == w.system);
    CHECK(r.params == w.params);
    for (int k = 0; k < 3; ++k) {
      CHECK(r.ic.q[k] == reference_ic.q[k]);
      CHECK(r.ic.p[k] == reference_ic.p[k]);
    }
    if (w.closure == 0.0) {
      CHECK_FALSE(r.closure_time);
      CHECK(detection_horizon(r) == 200.0);
    } else {
      REQUIRE(r.closure_time);
      CHECK(*r.closure_time == w.closure);
      CHECK(detection_horizon(r) == 2.0 * w.closure);
    }
  }
  CHECK(figure_recipe(1).horizons == std::vector<double>{2.0, 7.0, 50.0});
  try {
    figure_recipe(7);
    FAIL("accepted figure 7");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "figure");
  }
}

TEST_CASE("mutation semantics") {
  SystemParams p = SystemParams::parse("u1=2,u2=3/2,bz=7");
  SystemParams d = apply_mutation(p, "u1=+0.001");
  CHECK(d.u1 == doctest::Approx(2.001).epsilon(1e-15));
  CHECK(apply_mutation(p, "bz=-0.5").bz == 6.5);
  CHECK(apply_mutation(p, "bz=0.5").bz == 0.5);
  CHECK(apply_mutation(p, "u2=+1,bz=+1").u2 == 2.5);
  CHECK(apply_mutation(p, "u2=+1,bz=+1").bz == 8.0);
  CHECK_THROWS_AS(apply_mutation(p, "u9=+1"), ConfigError);
}

TEST_CASE("run_figure writes the artefacts") {
  fs::path dir = scratch("figure6");
  FigureResult r = run_figure(6, dir);
  REQUIRE(r.period.closed);
  CHECK(*r.period.period == doctest::Approx(8.0 * std::numbers::pi / 3.0).epsilon(1e-6));
  for (const char* name : {"figure6.csv", "figure6_meta.json", "figure6_report.json", "figure6_xy.svg", "figure6_xz.svg",
                           "figure6_yz.svg", "figure6_3d.svg"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }
  CHECK(r.files.size() == 7);
  nlohmann::json report = nlohmann::json::parse(slurp(dir / "figure6_report.json"));
  CHECK(report["figure"] == 6);
  CHECK(report["period"]["closed"] == true);
  CHECK(slurp(dir / "figure6_3d.svg").find("closes at t = 8 pi/3; measured") != std::string::npos);

  fs::path dir1 = scratch("figure1");
  FigureResult r1 = run_figure(1, dir1);
  CHECK_FALSE(r1.period.closed);
  CHECK(fs::exists(dir1 / "figure1_3d_t2.svg"));
  CHECK(fs::exists(dir1 / "figure1_3d_t7.svg"));
  CHECK(r1.files.size() == 9);
  fs::remove_all(dir);
  fs::remove_all(dir1);
}
