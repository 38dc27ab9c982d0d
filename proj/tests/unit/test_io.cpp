#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "qcflow/field/builtins.hpp"
#include "qcflow/field/grid_field.hpp"
#include "qcflow/io/exports.hpp"
#include "qcflow/io/grid_io.hpp"

using namespace qcflow;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "qcflow_io_tests";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("QCG1 round trip is bitwise for random grids") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (auto res : {std::vector<int>{7, 13}, std::vector<int>{4, 4, 6}}) {
    GridFunction g(res.size() == 2 ? Box::cube(2, -1.5, 2.5) : Box::cube(3, 0.0, 1.0),
                   res);
    for (auto& v : g.values()) v = dist(rng);
    const auto path = (temp_dir() / "roundtrip.qcg").string();
    save_grid_function(path, g);
    const GridFunction back = load_grid_function(path);
    REQUIRE(back.resolution() == g.resolution());
    CHECK(back.box().lo[0] == g.box().lo[0]);
    for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(back.at(i) == g.at(i));
  }
}

TEST_CASE("QCF1 sampled field reproduces the builtin within interpolation error") {
  const auto shear = make_shear_field();
  const auto path = (temp_dir() / "shear.qcf").string();
  save_grid_field(path, *shear, Box::cube(2, -2.0, 2.0), {65, 65}, 0.0, 2.0, 3);
  const auto loaded = load_grid_field(path);
  CHECK(loaded->dimension() == 2);
  CHECK(loaded->t_max() == 2.0);
  // shear is linear: multilinear interpolation is exact at interior points
  for (const Vec& x : {Vec(0.3, 0.7), Vec(-1.2, 0.4)}) {
    const Vec a = loaded->velocity(0.5, x);
    const Vec b = shear->velocity(0.5, x);
    CHECK((a - b).norm() < 1e-12);
  }
  CHECK_THROWS_AS(loaded->velocity(0.0, Vec(2.5, 0.0)), DomainError);
}

TEST_CASE("QCF1 time interpolation is linear between slices") {
  const auto ts = make_time_shear_field("sin");
  const auto path = (temp_dir() / "timeshear.qcf").string();
  save_grid_field(path, *ts, Box::cube(2, -1.0, 1.0), {33, 33}, 0.0, 1.0, 65);
  const auto loaded = load_grid_field(path);
  const Vec x(0.25, 0.5);
  // between slices the profile g(t) = sin t is sampled to second order
  const Vec a = loaded->velocity(0.33, x);
  const Vec b = ts->velocity(0.33, x);
  CHECK((a - b).norm() < 1e-4);
}

TEST_CASE("bad magic and truncation are IO errors") {
  const auto path = (temp_dir() / "bad.qcg").string();
  {
    std::ofstream os(path, std::ios::binary);
    os << "NOPE restoffile";
  }
  CHECK_THROWS_AS(load_grid_function(path), IoError);
  CHECK_THROWS_AS(load_grid_field(path), IoError);

  const auto trunc = (temp_dir() / "trunc.qcg").string();
  {
    GridFunction g(Box::cube(2, 0.0, 1.0), {8, 8});
    save_grid_function(trunc, g);
    fs::resize_file(trunc, 40);  // chop the value block
  }
  CHECK_THROWS_AS(load_grid_function(trunc), IoError);
}

TEST_CASE("trajectory CSV carries jacobian columns and one row per node") {
  const auto rot = make_rotation_field();
  TrajectoryOptions opt;
  opt.with_jacobian = true;
  opt.output_nodes = 4;
  const std::vector<Vec> seeds = {Vec(1.0, 0.0), Vec(0.0, 1.0)};
  const auto trajs = integrate_forward(*rot, 0.0, 1.0, seeds, {}, opt);
  const auto path = (temp_dir() / "traj.csv").string();
  write_trajectory_csv(path, trajs);

  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "seed_id,t,x_1,x_2,M_11,M_12,M_21,M_22,detM");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2 * 5);
}

TEST_CASE("format_double is deterministic and round-trippable") {
  CHECK(format_double(0.1) == format_double(0.1));
  const double v = 0.1234567890123456789;
  CHECK(std::stod(format_double(v)) == v);
}

}  // TEST_SUITE
