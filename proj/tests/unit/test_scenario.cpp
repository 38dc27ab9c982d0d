#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qcflow/core/errors.hpp"
#include "qcflow/field/grid_field.hpp"
#include "qcflow/io/exports.hpp"
#include "qcflow/scenario/scenario.hpp"

using namespace qcflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() / "qcflow_scenario_tests" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

json shear_distortion_scenario() {
  return json{{"name", "shear-distortion"},
              {"operation", "distortion"},
              {"field", {{"name", "shear"}}},
              {"parameters", {{"t", 1.0}, {"x", {0.3, -0.2}}, {"directions", 360}}}};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QCFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("shear distortion scenario passes with the ~3.8% margin") {
  const auto out = temp_dir("distortion");
  RunSettings settings{out.string(), 7, 1};
  const auto outcome = run_scenario_json(shear_distortion_scenario(), settings);
  CHECK(outcome.scenarios_run == 1);
  CHECK(outcome.all_bounds_passed);

  const json report = json::parse(slurp(out / "shear-distortion" / "distortion.json"));
  const std::string csv = slurp(out / "shear-distortion" / "distortion.csv");
  CHECK(csv.find("H,K,pointwise_bound") != std::string::npos);
  CHECK(report.at("pointwise_pass").get<bool>());
  const double margin = report.at("margin").get<double>();
  CHECK(margin > 0.028);
  CHECK(margin < 0.048);

  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("tool_version").get<std::string>() == "0.1.0");
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 7);
  CHECK(manifest.at("scenarios").size() == 1);
}

TEST_CASE("requesting times beyond the field's T is a config error") {
  json sc = {{"name", "too-long"},
             {"operation", "transport"},
             {"field", {{"name", "shear"}, {"t_max", 1.0}}},
             {"parameters",
              {{"u0",
                {{"builtin", "gaussian"},
                 {"box", {{-1.0, 1.0}, {-1.0, 1.0}}},
                 {"resolution", {32, 32}}}},
               {"times", {0.5, 2.0}}}}};
  RunSettings settings{temp_dir("toolong").string(), 0, 1};
  CHECK_THROWS_AS(run_scenario_json(sc, settings), ConfigError);
}

TEST_CASE("empty scenario list: zero runs, empty manifest, success") {
  const auto out = temp_dir("empty");
  RunSettings settings{out.string(), 0, 1};
  const auto outcome = run_scenario_json(json{{"scenarios", json::array()}}, settings);
  CHECK(outcome.scenarios_run == 0);
  CHECK(outcome.all_bounds_passed);
  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("scenarios").empty());
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  json sc = {{"name", "flow"},
             {"operation", "flow"},
             {"field", {{"name", "timeshear"}, {"profile", "cos"}}},
             {"parameters",
              {{"t", 1.0},
               {"seeds", {{"lattice", {{"box", {{-1.0, 1.0}, {-1.0, 1.0}}}, {"count", 4}}}}}}}};
  const auto out_a = temp_dir("det_a");
  const auto out_b = temp_dir("det_b");
  run_scenario_json(sc, RunSettings{out_a.string(), 11, 1});
  run_scenario_json(sc, RunSettings{out_b.string(), 11, 1});
  CHECK(slurp(out_a / "flow" / "trajectories.csv") ==
        slurp(out_b / "flow" / "trajectories.csv"));
  CHECK(slurp(out_a / "manifest.json") == slurp(out_b / "manifest.json"));
}

TEST_CASE("spaces and vorticity scenarios emit their artifacts") {
  json spaces = {{"name", "norms"},
                 {"operation", "spaces"},
                 {"parameters",
                  {{"u",
                    {{"builtin", "log_abs"},
                     {"box", {{-1.0, 1.0}, {-1.0, 1.0}}},
                     {"resolution", {64, 64}}}},
                   {"seminorms", {"bmo", "vmo", "w1n", "gagliardo"}}}}};
  const auto out = temp_dir("spaces");
  const auto outcome = run_scenario_json(spaces, RunSettings{out.string(), 0, 1});
  CHECK(outcome.all_bounds_passed);
  const std::string csv = slurp(out / "norms" / "seminorms.csv");
  CHECK(csv.find("kind,parameters,resolution,value") == 0);
  CHECK(csv.find("bmo") != std::string::npos);
  CHECK(csv.find("gagliardo") != std::string::npos);

  json vort = {{"name", "vort"},
               {"operation", "vorticity"},
               {"parameters",
                {{"omega0",
                  {{"kind", "disc"},
                   {"box", {{-2.5, 2.5}, {-2.5, 2.5}}},
                   {"resolution", {64, 64}}}},
                 {"dt", 0.01},
                 {"steps", 3},
                 {"record_every", 3}}}};
  const auto vout = temp_dir("vort");
  run_scenario_json(vort, RunSettings{vout.string(), 0, 1});
  const std::string diag = slurp(vout / "vort" / "diagnostics.csv");
  CHECK(diag.find("t,circulation,max_omega,bmo") == 0);
}

TEST_CASE("flow scenarios accept explicit seed points") {
  json sc = {{"name", "points"},
             {"operation", "flow"},
             {"field", {{"name", "rotation"}}},
             {"parameters",
              {{"t", 1.0},
               {"output_nodes", 4},
               {"seeds", {{"points", {{1.0, 0.0}, {0.0, 0.5}}}}}}}};
  const auto out = temp_dir("points");
  run_scenario_json(sc, RunSettings{out.string(), 0, 1});
  const std::string csv = slurp(out / "points" / "trajectories.csv");
  // two seeds, five nodes each, plus the header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("cli: exit codes for config errors and missing files") {
  CHECK(run_cli("--config /nonexistent/config.json") == 2);

  const auto dir = temp_dir("cli_bad");
  const auto bad = dir / "bad.json";
  { std::ofstream(bad) << "{\"operation\": \"nope\"}"; }
  CHECK(run_cli("--config " + bad.string() + " --out " + (dir / "out").string()) == 2);

  const auto garbled = dir / "garbled.json";
  { std::ofstream(garbled) << "{not json"; }
  CHECK(run_cli("--config " + garbled.string()) == 2);
}

TEST_CASE("cli: scenario run and filtered acceptance criterion succeed") {
  const auto dir = temp_dir("cli_ok");
  const auto cfg = dir / "cfg.json";
  { std::ofstream(cfg) << shear_distortion_scenario().dump(); }
  CHECK(run_cli("--config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
  CHECK(run_cli("--suite --filter \"09\"") == 0);
}

TEST_CASE("cli negative control: loosened tolerances break the inverse-flow criterion") {
  CHECK(run_cli("--suite --filter \"03\" --tol-scale 1e6") == 1);
}

TEST_CASE("cli: runtime numeric failures exit with code 3") {
  // a sampled-grid wind on a small box: backward characteristics leave the
  // evaluable domain mid-run
  const auto dir = temp_dir("cli_numeric");
  const auto qcf = dir / "wind.qcf";
  {
    // constant rightward wind via a one-slice 3x3 grid
    std::vector<double> samples;
    for (int node = 0; node < 9; ++node) {
      samples.push_back(1.0);
      samples.push_back(0.0);
    }
    GridVectorField wind(Box::cube(2, -1.0, 1.0), {3, 3}, 0.0, 10.0, 1, samples);
    save_grid_field(qcf.string(), wind, Box::cube(2, -1.0, 1.0), {3, 3}, 0.0, 10.0, 1);
  }
  json sc = {{"name", "escape"},
             {"operation", "transport"},
             {"field", {{"file", qcf.string()}}},
             {"parameters",
              {{"u0",
                {{"builtin", "gaussian"},
                 {"box", {{-1.0, 1.0}, {-1.0, 1.0}}},
                 {"resolution", {16, 16}}}},
               {"times", {5.0}}}}};
  const auto cfg = dir / "cfg.json";
  { std::ofstream(cfg) << sc.dump(); }
  CHECK(run_cli("--config " + cfg.string() + " --out " + (dir / "out").string()) == 3);
}

TEST_CASE("cli: solve and vorticity subcommands produce their artifacts") {
  const auto dir = temp_dir("cli_sub");
  const auto solve_out = dir / "solve";
  CHECK(run_cli("solve --field shear --u0 gaussian --times 0,0.5 --seminorms bmo,w1n"
                " --box=-1,1 --res 64 --u0-box=-2,2 --u0-res 128 --out " +
                solve_out.string()) == 0);
  CHECK(fs::exists(solve_out / "solve" / "snapshot_0.qcg"));
  CHECK(fs::exists(solve_out / "solve" / "seminorms.csv"));
  CHECK(fs::exists(solve_out / "solve" / "transport.json"));
  CHECK(fs::exists(solve_out / "manifest.json"));

  const auto vort_out = dir / "vort";
  CHECK(run_cli("vorticity --omega0 disc --dt 0.01 --steps 2 --res 48"
                " --box=-2.5,2.5 --record-every 2 --out " +
                vort_out.string()) == 0);
  CHECK(fs::exists(vort_out / "vorticity" / "diagnostics.csv"));
  CHECK(fs::exists(vort_out / "vorticity" / "omega_0.qcg"));
}

TEST_CASE("field descriptor files alias builtins by name") {
  const auto dir = temp_dir("descriptor");
  const auto desc = dir / "field.json";
  { std::ofstream(desc) << R"({"name": "spiral", "dilation_rate": 0.25})"; }
  json sc = shear_distortion_scenario();
  sc["field"] = {{"file", desc.string()}};
  sc["name"] = "via-descriptor";
  const auto outcome = run_scenario_json(sc, RunSettings{(dir / "out").string(), 0, 1});
  CHECK(outcome.all_bounds_passed);  // conformal spiral: H = 1 under its bound
}

}  // TEST_SUITE
