// qcflow command line: scenario runner, acceptance suite, and the solve /
// vorticity subcommands.
//
// Exit codes: 0 ok, 1 criterion or bound-check failure, 2 config error,
// 3 numeric error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcflow/acceptance/acceptance.hpp"
#include "qcflow/core/errors.hpp"
#include "qcflow/core/parallel.hpp"
#include "qcflow/scenario/scenario.hpp"
#include "qcflow/version.hpp"

namespace {

using nlohmann::json;

json parse_times_list(const std::string& csv) {
  json times = json::array();
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    times.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return times;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcflow: quasiconformal flows, transport, and seminorm checks"};
  app.set_version_flag("--version", qcflow::kVersion);
  app.fallthrough();  // global flags (--out, --seed, --threads) after subcommands

  std::string config_path, filter, out_dir = "out";
  bool suite = false;
  std::uint64_t seed = 0;
  int threads = 0;
  double tol_scale = 1.0;
  app.add_option("--config", config_path, "scenario JSON config to run");
  app.add_flag("--suite", suite, "run the acceptance suite");
  app.add_option("--filter", filter, "criterion name filter for --suite");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "PRNG seed recorded in manifests");
  app.add_option("--threads", threads, "worker threads (QCFLOW_THREADS fallback)");
  app.add_option("--tol-scale", tol_scale,
                 "scale acceptance integrator tolerances (diagnostics)")
      ->group("");  // hidden

  // solve subcommand -> transport scenario
  auto* solve = app.add_subcommand("solve", "transport a grid function along a field");
  std::string sv_field = "shear", sv_u0 = "gaussian", sv_times = "0,0.5,1";
  std::string sv_seminorms = "bmo";
  std::string sv_box = "-1,1", sv_u0_box;
  int sv_res = 256, sv_u0_res = 0;
  double sv_tol = 1e-8;
  solve->add_option("--field", sv_field, "builtin field name or .qcf file");
  solve->add_option("--u0", sv_u0, "builtin u0 (log_abs|gaussian|coordinate|constant) or .qcg file");
  solve->add_option("--times", sv_times, "comma-separated snapshot times");
  solve->add_option("--seminorms", sv_seminorms, "comma-separated seminorm kinds");
  solve->add_option("--box", sv_box, "snapshot box as lo,hi (per-axis symmetric)");
  solve->add_option("--u0-box", sv_u0_box, "u0 source box as lo,hi (defaults to --box)");
  solve->add_option("--res", sv_res, "snapshot resolution per axis");
  solve->add_option("--u0-res", sv_u0_res, "u0 source resolution (defaults to --res)");
  solve->add_option("--tolerance", sv_tol, "integrator tolerance");

  // vorticity subcommand
  auto* vort = app.add_subcommand("vorticity", "2D Biot-Savart vorticity evolution");
  std::string vt_omega0 = "disc", vt_path = "fft", vt_box = "-2.5,2.5";
  int vt_res = 256, vt_steps = 10, vt_record = 1;
  double vt_dt = 0.01;
  vort->add_option("--omega0", vt_omega0, "disc | gaussians | .qcg file");
  vort->add_option("--dt", vt_dt, "time step");
  vort->add_option("--steps", vt_steps, "number of steps");
  vort->add_option("--box", vt_box, "domain box as lo,hi");
  vort->add_option("--res", vt_res, "resolution per axis");
  vort->add_option("--record-every", vt_record, "keep every k-th state");
  vort->add_option("--path", vt_path, "convolution path: fft | direct");

  CLI11_PARSE(app, argc, argv);

  try {
    qcflow::set_thread_count(qcflow::resolve_thread_count(threads));
    qcflow::RunSettings settings{out_dir, seed, threads};

    if (suite) {
      qcflow::acceptance::Options opt;
      opt.filter = filter;
      opt.tol_scale = tol_scale;
      const int failures = qcflow::acceptance::run_and_report(opt, std::cout);
      return failures == 0 ? 0 : 1;
    }

    if (!config_path.empty()) {
      const auto outcome = qcflow::run_scenario_file(config_path, settings);
      std::cout << outcome.scenarios_run << " scenario(s) run, bounds "
                << (outcome.all_bounds_passed ? "ok" : "FAILED") << "\n";
      return outcome.all_bounds_passed ? 0 : 1;
    }

    if (*solve) {
      json sc;
      sc["name"] = "solve";
      sc["operation"] = "transport";
      if (sv_field.size() > 4 && sv_field.substr(sv_field.size() - 4) == ".qcf")
        sc["field"] = {{"file", sv_field}};
      else
        sc["field"] = {{"name", sv_field}};
      json params;
      json u0;
      const json box_vals = parse_times_list(sv_box);
      if (sv_u0.size() > 4 && sv_u0.substr(sv_u0.size() - 4) == ".qcg") {
        u0["file"] = sv_u0;
      } else {
        u0["builtin"] = sv_u0;
        const json ub = sv_u0_box.empty() ? box_vals : parse_times_list(sv_u0_box);
        u0["box"] = {{ub[0], ub[1]}, {ub[0], ub[1]}};
        const int ur = sv_u0_res > 0 ? sv_u0_res : sv_res;
        u0["resolution"] = {ur, ur};
      }
      params["u0"] = u0;
      params["times"] = parse_times_list(sv_times);
      params["seminorms"] = json::array();
      std::size_t pos = 0;
      while (pos < sv_seminorms.size()) {
        std::size_t next = sv_seminorms.find(',', pos);
        if (next == std::string::npos) next = sv_seminorms.size();
        params["seminorms"].push_back(sv_seminorms.substr(pos, next - pos));
        pos = next + 1;
      }
      params["tolerance"] = sv_tol;
      params["target_box"] = {{box_vals[0], box_vals[1]}, {box_vals[0], box_vals[1]}};
      params["target_resolution"] = {sv_res, sv_res};
      sc["parameters"] = params;
      const auto outcome = qcflow::run_scenario_json(sc, settings);
      return outcome.all_bounds_passed ? 0 : 1;
    }

    if (*vort) {
      json sc;
      sc["name"] = "vorticity";
      sc["operation"] = "vorticity";
      json params;
      json om;
      if (vt_omega0 == "disc" || vt_omega0 == "gaussians")
        om["kind"] = vt_omega0;
      else
        om["file"] = vt_omega0;
      const json vb = parse_times_list(vt_box);
      om["box"] = {{vb[0], vb[1]}, {vb[0], vb[1]}};
      om["resolution"] = {vt_res, vt_res};
      params["omega0"] = om;
      params["dt"] = vt_dt;
      params["steps"] = vt_steps;
      params["record_every"] = vt_record;
      params["path"] = vt_path;
      sc["parameters"] = params;
      const auto outcome = qcflow::run_scenario_json(sc, settings);
      return outcome.all_bounds_passed ? 0 : 1;
    }

    std::cout << app.help();
    return 0;
  } catch (const qcflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qcflow::ArgumentError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qcflow::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
