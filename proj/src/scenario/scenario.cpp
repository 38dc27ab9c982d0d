#include "qcflow/scenario/scenario.hpp"

#include <filesystem>
#include <fstream>

#include "qcflow/core/parallel.hpp"
#include "qcflow/distortion/distortion.hpp"
#include "qcflow/field/builtins.hpp"
#include "qcflow/flow/bihari.hpp"
#include "qcflow/flow/flow_map.hpp"
#include "qcflow/io/exports.hpp"
#include "qcflow/io/grid_io.hpp"
#include "qcflow/transport/transport.hpp"
#include "qcflow/version.hpp"
#include "qcflow/vorticity/biot_savart.hpp"

namespace qcflow {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Box parse_box(const json& j) {
  const int n = static_cast<int>(j.size());
  if (n < 2 || n > kMaxDim) throw ConfigError("box must list 2..4 axis ranges");
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    if (j[i].size() != 2) throw ConfigError("box axis range must be [lo, hi]");
    lo[i] = j[i][0].get<double>();
    hi[i] = j[i][1].get<double>();
  }
  return Box(lo, hi);
}

std::vector<int> parse_resolution(const json& j) {
  std::vector<int> res;
  if (j.is_number_integer()) {
    res = {j.get<int>(), j.get<int>()};
  } else {
    for (const auto& v : j) res.push_back(v.get<int>());
  }
  return res;
}

Vec parse_point(const json& j) {
  const int n = static_cast<int>(j.size());
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = j[i].get<double>();
  return p;
}

GridFunction parse_grid_function(const json& j) {
  if (j.contains("file")) return load_grid_function(j.at("file").get<std::string>());
  const Box box = parse_box(j.at("box"));
  const auto res = parse_resolution(j.at("resolution"));
  const std::string builtin = j.value("builtin", std::string("constant"));
  if (builtin == "log_abs")
    return GridFunction::sample(box, res,
                                [](const Vec& x) { return std::log(x.norm()); });
  if (builtin == "gaussian") {
    const Vec c = j.contains("center") ? parse_point(j.at("center")) : Vec(0.0, 0.0);
    const double sigma = j.value("sigma", 0.3);
    return GridFunction::sample(box, res, [&](const Vec& x) {
      return std::exp(-(x - c).dot(x - c) / (sigma * sigma));
    });
  }
  if (builtin == "coordinate") {
    const int axis = j.value("axis", 0);
    return GridFunction::sample(box, res, [&](const Vec& x) { return x[axis]; });
  }
  if (builtin == "constant") {
    const double value = j.value("value", 1.0);
    return GridFunction::sample(box, res, [&](const Vec&) { return value; });
  }
  throw ConfigError("unknown builtin grid function '" + builtin + "'");
}

StepControl parse_control(const json& params) {
  StepControl c;
  c.abs_tol = params.value("tolerance", 1e-9);
  if (!(c.abs_tol > 0)) throw ConfigError("tolerance must be positive");
  return c;
}

std::vector<double> parse_times(const json& params, const VectorField& field) {
  std::vector<double> times;
  for (const auto& t : params.at("times")) times.push_back(t.get<double>());
  if (times.empty()) throw ConfigError("scenario lists no times");
  for (double t : times)
    if (t < 0.0 || t > field.t_max())
      throw ConfigError("requested time " + std::to_string(t) +
                        " outside the field's interval [0, " +
                        std::to_string(field.t_max()) + "]");
  return times;
}

// one scenario; returns false when a bound check failed
bool run_one(const json& sc, const fs::path& out, json& manifest_entry) {
  const std::string name = sc.value("name", std::string("scenario"));
  const std::string operation = sc.at("operation").get<std::string>();
  const FieldPtr field =
      sc.contains("field") ? make_field(sc.at("field")) : FieldPtr{};
  const json params = sc.value("parameters", json::object());

  fs::create_directories(out);
  manifest_entry["name"] = name;
  manifest_entry["operation"] = operation;
  json tolerances = json::object();
  bool passed = true;

  if (operation == "flow") {
    if (!field) throw ConfigError("flow scenario needs a field");
    const StepControl control = parse_control(params);
    tolerances["integrator_abs_tol"] = control.abs_tol;
    const double s = params.value("s", 0.0);
    const double t = params.at("t").get<double>();
    if (t > field->t_max() || s < 0.0 || s > t)
      throw ConfigError("flow window outside the field's interval");

    std::vector<Vec> seeds;
    if (params.contains("seeds") && params.at("seeds").contains("points")) {
      for (const auto& p : params.at("seeds").at("points")) seeds.push_back(parse_point(p));
    } else if (params.contains("seeds") && params.at("seeds").contains("lattice")) {
      const auto& lat = params.at("seeds").at("lattice");
      seeds = seed_lattice(parse_box(lat.at("box")), lat.value("count", 10));
    } else {
      seeds = seed_lattice(Box::cube(field->dimension(), -1.0, 1.0), 10);
    }

    TrajectoryOptions topt;
    topt.output_nodes = params.value("output_nodes", 16);
    topt.with_jacobian = params.value("jacobian", true);
    topt.with_scalar_jacobian = topt.with_jacobian;
    const auto trajs = integrate_forward(*field, s, t, seeds, control, topt);
    write_trajectory_csv((out / "trajectories.csv").string(), trajs);
    manifest_entry["artifacts"] = {"trajectories.csv"};
  } else if (operation == "distortion") {
    if (!field) throw ConfigError("distortion scenario needs a field");
    StepControl control = parse_control(params);
    if (!params.contains("tolerance")) control.abs_tol = 1e-12;
    tolerances["integrator_abs_tol"] = control.abs_tol;
    const double t = params.value("t", 1.0);
    if (t > field->t_max()) throw ConfigError("requested time beyond the field's T");
    const Vec x = params.contains("x") ? parse_point(params.at("x")) : Vec(0.3, -0.2);
    const int directions = params.value("directions", 360);

    const PointMap map = flow_point_map(*field, 0.0, t, control);
    std::vector<double> radii = default_radii(params.value("radius_scale", 1.0));
    DistortionReport report = measure_ratios(map, field->dimension(), x, radii, directions);
    extrapolate_H(report);
    report.k_estimate = analytic_K(map, field->dimension(), x);
    report.bound_tol = params.value("bound_tol", 0.02);
    tolerances["bound_tol"] = report.bound_tol;

    TrajectoryOptions topt;
    topt.with_anticonformal = true;
    topt.output_nodes = 32;
    const auto traj =
        integrate_forward(*field, 0.0, t, std::span<const Vec>(&x, 1), control, topt);
    verify_bounds(*field, report, traj[0]);
    passed = report.pointwise_pass && report.uniform_pass;

    json rep = distortion_report_json(report);
    rep["margin"] = (report.pointwise_bound - report.h_estimate) / report.h_estimate;
    write_text_file((out / "distortion.json").string(), rep.dump(2) + "\n");
    write_distortion_csv((out / "distortion.csv").string(), {report});
    manifest_entry["artifacts"] = {"distortion.json", "distortion.csv"};
  } else if (operation == "transport") {
    if (!field) throw ConfigError("transport scenario needs a field");
    SolveOptions so;
    so.control = parse_control(params);
    tolerances["integrator_abs_tol"] = so.control.abs_tol;
    const GridFunction u0 = parse_grid_function(params.at("u0"));
    const auto times = parse_times(params, *field);
    if (params.contains("target_box")) {
      so.have_target = true;
      so.target_box = parse_box(params.at("target_box"));
      so.target_resolution = parse_resolution(params.at("target_resolution"));
    }
    std::vector<SeminormKind> kinds;
    for (const auto& k : params.value("seminorms", json::array()))
      kinds.push_back(parse_seminorm_kind(k.get<std::string>()));

    const auto sol = solve(*field, u0, times, kinds, so);

    json track = json::object();
    std::vector<SeminormResult> rows;
    for (const auto& [kind, results] : sol.seminorm_track) {
      json values = json::array();
      for (const auto& r : results) values.push_back(r.value);
      track[seminorm_kind_name(kind)] = values;
      rows.insert(rows.end(), results.begin(), results.end());
    }
    json info;
    info["times"] = sol.times;
    info["seminorm_track"] = track;
    std::vector<std::string> artifacts;
    for (std::size_t k = 0; k < sol.snapshots.size(); ++k) {
      const std::string fname = "snapshot_" + std::to_string(k) + ".qcg";
      save_grid_function((out / fname).string(), sol.snapshots[k]);
      artifacts.push_back(fname);
    }
    if (!rows.empty()) {
      write_seminorm_csv((out / "seminorms.csv").string(), rows);
      artifacts.push_back("seminorms.csv");
    }
    write_text_file((out / "transport.json").string(), info.dump(2) + "\n");
    artifacts.push_back("transport.json");
    manifest_entry["artifacts"] = artifacts;
  } else if (operation == "spaces") {
    const GridFunction u = parse_grid_function(params.at("u"));
    std::vector<SeminormResult> rows;
    for (const auto& k : params.value("seminorms", json::array({"bmo"}))) {
      const SeminormKind kind = parse_seminorm_kind(k.get<std::string>());
      rows.push_back(compute_seminorm(u, kind, params.value("vmo_delta", 8.0),
                                      params.value("s", 0.5), params.value("p", 4.0)));
    }
    write_seminorm_csv((out / "seminorms.csv").string(), rows);
    manifest_entry["artifacts"] = {"seminorms.csv"};
  } else if (operation == "vorticity") {
    json om = params.value("omega0", json::object());
    if (om.is_string()) {
      const std::string s = om.get<std::string>();
      om = json::object();
      if (s == "disc" || s == "gaussians")
        om["kind"] = s;
      else
        om["file"] = s;
    }
    const Box box = om.contains("box") ? parse_box(om.at("box")) : Box::cube(2, -2.5, 2.5);
    const auto res = om.contains("resolution") ? parse_resolution(om.at("resolution"))
                                               : std::vector<int>{256, 256};
    GridFunction omega0(box, res);
    const std::string kind = om.value("kind", std::string("disc"));
    if (om.contains("file")) {
      omega0 = load_grid_function(om.at("file").get<std::string>());
    } else if (kind == "disc") {
      omega0 = disc_vorticity(box, res, om.value("radius", 1.0), om.value("strength", 1.0));
    } else if (kind == "gaussians") {
      std::vector<GaussianBlob> blobs;
      if (om.contains("blobs")) {
        for (const auto& b : om.at("blobs"))
          blobs.push_back({parse_point(b.at("center")), b.value("sigma", 0.2),
                           b.value("strength", 1.0)});
      } else {
        blobs = {{Vec(-0.4, 0.0), 0.2, 1.0}, {Vec(0.4, 0.0), 0.2, 1.0}};
      }
      omega0 = gaussian_vorticity(box, res, blobs);
    } else {
      throw ConfigError("unknown omega0 kind '" + kind + "'");
    }

    EvolveOptions eo;
    eo.record_every = params.value("record_every", 1);
    eo.path = params.value("path", std::string("fft")) == "direct"
                  ? ConvolutionPath::direct
                  : ConvolutionPath::fft;
    const double dt = params.at("dt").get<double>();
    const int steps = params.at("steps").get<int>();
    const auto states = evolve_vorticity(omega0, dt, steps, eo);
    const auto diag = vorticity_diagnostics(states);
    write_vorticity_csv((out / "diagnostics.csv").string(), diag);
    std::vector<std::string> artifacts = {"diagnostics.csv"};
    for (std::size_t k = 0; k < states.size(); ++k) {
      const std::string fname = "omega_" + std::to_string(k) + ".qcg";
      save_grid_function((out / fname).string(), states[k].omega);
      artifacts.push_back(fname);
    }
    manifest_entry["artifacts"] = artifacts;
  } else {
    throw ConfigError("unknown operation '" + operation + "'");
  }

  manifest_entry["tolerances"] = tolerances;
  manifest_entry["passed"] = passed;
  return passed;
}

}  // namespace

RunOutcome run_scenario_json(const nlohmann::json& config, const RunSettings& settings,
                             const std::string& config_hash) {
  set_thread_count(resolve_thread_count(settings.threads));

  std::vector<json> scenarios;
  if (config.contains("scenarios")) {
    for (const auto& sc : config.at("scenarios")) scenarios.push_back(sc);
  } else if (config.contains("operation")) {
    scenarios.push_back(config);
  } else if (!config.is_null() && !(config.is_object() && config.empty())) {
    throw ConfigError("config must be a scenario object or {\"scenarios\": [...]}");
  }

  json manifest;
  manifest["tool_version"] = kVersion;
  manifest["config_hash"] = config_hash;
  manifest["seed"] = settings.seed;
  manifest["threads"] = thread_count();
  manifest["assumptions"] = {
      "Db in L^q_loc integrability of the velocity gradient is assumed per "
      "scenario, not verified"};
  manifest["scenarios"] = json::array();

  RunOutcome outcome;
  const fs::path out_root = settings.out_dir;
  fs::create_directories(out_root);
  for (const auto& sc : scenarios) {
    json entry;
    const std::string name = sc.value("name", "scenario_" +
                                                  std::to_string(outcome.scenarios_run));
    const bool ok = run_one(sc, out_root / name, entry);
    outcome.all_bounds_passed = outcome.all_bounds_passed && ok;
    manifest["scenarios"].push_back(entry);
    ++outcome.scenarios_run;
  }
  write_text_file((out_root / "manifest.json").string(), manifest.dump(2) + "\n");
  return outcome;
}

RunOutcome run_scenario_file(const std::string& config_path, const RunSettings& settings) {
  std::ifstream is(config_path);
  if (!is) throw ConfigError("cannot open config file '" + config_path + "'");
  json config;
  try {
    config = json::parse(is);
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in '" + config_path + "': " + e.what());
  }
  return run_scenario_json(config, settings, fnv1a_file_hash(config_path));
}

}  // namespace qcflow
