#include "qcflow/flow/flow_map.hpp"

#include <cmath>

#include "qcflow/core/parallel.hpp"
#include "rk4_driver.hpp"

namespace qcflow {

namespace {

struct StateLayout {
  int n = 0;
  bool with_jacobian = false;
  bool with_log_jacobian = false;
  bool with_anticonformal = false;

  std::size_t size() const {
    std::size_t s = static_cast<std::size_t>(n);
    if (with_jacobian) s += static_cast<std::size_t>(n) * n;
    if (with_log_jacobian) s += 1;
    if (with_anticonformal) s += 1;
    return s;
  }
  std::size_t jac_offset() const { return static_cast<std::size_t>(n); }
  std::size_t logj_offset() const {
    return static_cast<std::size_t>(n) + (with_jacobian ? static_cast<std::size_t>(n) * n : 0);
  }
  std::size_t sa_offset() const { return logj_offset() + (with_log_jacobian ? 1 : 0); }
};

Vec state_position(const StateLayout& lay, std::span<const double> y) {
  Vec x(lay.n);
  for (int i = 0; i < lay.n; ++i) x[i] = y[static_cast<std::size_t>(i)];
  return x;
}

detail::Rhs make_rhs(const VectorField& field, const StateLayout& lay) {
  return [&field, lay](double t, std::span<const double> y, std::span<double> dy) {
    const Vec x = state_position(lay, y);
    const Vec b = field.velocity(t, x);
    if (!b.finite()) throw NumericError("non-finite velocity along trajectory");
    for (int i = 0; i < lay.n; ++i) dy[static_cast<std::size_t>(i)] = b[i];

    const bool need_db = lay.with_jacobian || lay.with_log_jacobian || lay.with_anticonformal;
    if (!need_db) return;
    const Mat db = field.derivative(t, x);
    if (!db.finite()) throw NumericError("non-finite velocity gradient along trajectory");

    if (lay.with_jacobian) {
      const std::size_t o = lay.jac_offset();
      // dM/dt = Db M, both row-major
      for (int i = 0; i < lay.n; ++i)
        for (int j = 0; j < lay.n; ++j) {
          double s = 0.0;
          for (int k = 0; k < lay.n; ++k)
            s += db(i, k) * y[o + static_cast<std::size_t>(k * lay.n + j)];
          dy[o + static_cast<std::size_t>(i * lay.n + j)] = s;
        }
    }
    if (lay.with_log_jacobian) dy[lay.logj_offset()] = db.trace();
    if (lay.with_anticonformal) {
      const int n = lay.n;
      Mat s(n);
      const double div_over_n = db.trace() / n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (db(i, j) + db(j, i));
      for (int i = 0; i < n; ++i) s(i, i) -= div_over_n;
      dy[lay.sa_offset()] = 2.0 * operator_norm(s);
    }
  };
}

FlowTrajectory integrate_one(const VectorField& field, double from, double to,
                             const Vec& seed, std::size_t seed_index,
                             const StepControl& control, const TrajectoryOptions& options,
                             bool forward) {
  StateLayout lay{field.dimension(), options.with_jacobian,
                  options.with_scalar_jacobian, options.with_anticonformal};

  FlowTrajectory traj;
  traj.seed = seed;
  traj.forward = forward;

  std::vector<double> y(lay.size(), 0.0);
  for (int i = 0; i < lay.n; ++i) y[static_cast<std::size_t>(i)] = seed[i];
  if (lay.with_jacobian) {
    const std::size_t o = lay.jac_offset();
    for (int i = 0; i < lay.n; ++i) y[o + static_cast<std::size_t>(i * lay.n + i)] = 1.0;
  }

  detail::Rk4Driver driver(lay.size(), make_rhs(field, lay), control);

  const int nodes = std::max(1, options.output_nodes);
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.positions.push_back(state_position(lay, y));
    if (lay.with_jacobian) {
      Mat m(lay.n);
      const std::size_t o = lay.jac_offset();
      for (int i = 0; i < lay.n; ++i)
        for (int j = 0; j < lay.n; ++j)
          m(i, j) = y[o + static_cast<std::size_t>(i * lay.n + j)];
      traj.jacobians.push_back(m);
    }
    if (lay.with_log_jacobian) traj.log_jacobian.push_back(y[lay.logj_offset()]);
    if (lay.with_anticonformal)
      traj.anticonformal_integral.push_back(y[lay.sa_offset()]);
  };

  record(from);
  double t_cur = from;
  try {
    for (int k = 1; k <= nodes; ++k) {
      const double t_next = from + (to - from) * k / nodes;
      driver.advance(t_cur, t_next, y);
      t_cur = t_next;
      record(t_next);
    }
  } catch (const DomainError&) {
    throw EscapeError(seed_index, t_cur,
                      "trajectory left the evaluable domain near t = " +
                          std::to_string(t_cur));
  }
  return traj;
}

void check_window(const VectorField& field, double s, double t) {
  if (!(0.0 <= s && s <= t && t <= field.t_max()))
    throw ArgumentError("flow window must satisfy 0 <= s <= t <= t_max");
}

}  // namespace

std::vector<FlowTrajectory> integrate_forward(const VectorField& field, double s,
                                              double t, std::span<const Vec> seeds,
                                              const StepControl& control,
                                              const TrajectoryOptions& options) {
  check_window(field, s, t);
  std::vector<FlowTrajectory> out(seeds.size());
  parallel_for(
      0, seeds.size(),
      [&](std::size_t i) {
        out[i] = integrate_one(field, s, t, seeds[i], i, control, options, true);
      },
      4);
  return out;
}

std::vector<FlowTrajectory> integrate_backward(const VectorField& field, double s,
                                               double t, std::span<const Vec> seeds,
                                               const StepControl& control,
                                               const TrajectoryOptions& options) {
  check_window(field, s, t);
  std::vector<FlowTrajectory> out(seeds.size());
  parallel_for(
      0, seeds.size(),
      [&](std::size_t i) {
        out[i] = integrate_one(field, t, s, seeds[i], i, control, options, false);
      },
      4);
  return out;
}

Vec flow_endpoint(const VectorField& field, double s, double t, const Vec& seed,
                  const StepControl& control) {
  TrajectoryOptions opt;
  opt.output_nodes = 1;
  return integrate_forward(field, s, t, std::span<const Vec>(&seed, 1), control, opt)[0]
      .final_position();
}

Vec backward_flow_endpoint(const VectorField& field, double s, double t, const Vec& seed,
                           const StepControl& control) {
  TrajectoryOptions opt;
  opt.output_nodes = 1;
  return integrate_backward(field, s, t, std::span<const Vec>(&seed, 1), control, opt)[0]
      .final_position();
}

FlowTrajectory propagate_jacobian(const VectorField& field,
                                  const FlowTrajectory& trajectory,
                                  const StepControl& control) {
  if (trajectory.times.size() < 2)
    throw ArgumentError("trajectory has no time window to propagate over");
  TrajectoryOptions opt;
  opt.output_nodes = static_cast<int>(trajectory.times.size()) - 1;
  opt.with_jacobian = true;
  opt.with_scalar_jacobian = true;
  const double from = trajectory.times.front();
  const double to = trajectory.times.back();
  return integrate_one(field, from, to, trajectory.seed, 0, control, opt,
                       trajectory.forward);
}

double verify_inverse(const VectorField& field, std::span<const Vec> seeds, double s,
                      double t, const StepControl& control) {
  double worst = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Vec mapped = flow_endpoint(field, s, t, seeds[i], control);
    const Vec back = backward_flow_endpoint(field, s, t, mapped, control);
    worst = std::max(worst, (back - seeds[i]).norm());
  }
  return worst;
}

std::vector<Vec> seed_lattice(const Box& box, int count_per_axis) {
  if (box.dim() != 2) throw ArgumentError("seed_lattice expects a 2D box");
  if (count_per_axis < 1) throw ArgumentError("seed lattice needs >= 1 per axis");
  std::vector<Vec> seeds;
  seeds.reserve(static_cast<std::size_t>(count_per_axis) * count_per_axis);
  for (int i = 0; i < count_per_axis; ++i)
    for (int j = 0; j < count_per_axis; ++j)
      seeds.push_back(Vec(box.lo[0] + (i + 0.5) * box.extent(0) / count_per_axis,
                          box.lo[1] + (j + 0.5) * box.extent(1) / count_per_axis));
  return seeds;
}

}  // namespace qcflow
