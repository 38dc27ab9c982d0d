#include "qcflow/flow/pair_ratio.hpp"

#include <cmath>

#include "rk4_driver.hpp"

namespace qcflow {

PairRatioTrace pair_ratio_trace(const VectorField& field, const Vec& x, const Vec& y,
                                const Vec& z, double t_end, const StepControl& control,
                                int output_nodes) {
  const int n = field.dimension();
  if (y.n != n || z.n != n || x.n != n)
    throw ArgumentError("pair ratio offsets must match the field dimension");
  const double ny = y.norm(), nz = z.norm();
  if (!(ny > 0.0) || !(nz > 0.0))
    throw ArgumentError("pair ratio offsets must be nonzero");
  if (std::abs(ny - nz) > 1e-12 * ny)
    throw ArgumentError("pair ratio offsets must have equal length");
  if (!(t_end > 0.0) || t_end > field.t_max())
    throw ArgumentError("t_end outside the field's time interval");
  if (output_nodes < 8) throw ArgumentError("pair ratio trace needs >= 8 nodes");

  // coupled state: [phi(x), phi(x+y), phi(x+z)]
  const std::size_t dim = static_cast<std::size_t>(3 * n);
  auto rhs = [&field, n](double t, std::span<const double> s, std::span<double> ds) {
    for (int block = 0; block < 3; ++block) {
      Vec p(n);
      for (int i = 0; i < n; ++i) p[i] = s[static_cast<std::size_t>(block * n + i)];
      const Vec v = field.velocity(t, p);
      for (int i = 0; i < n; ++i) ds[static_cast<std::size_t>(block * n + i)] = v[i];
    }
  };

  std::vector<double> state(dim);
  for (int i = 0; i < n; ++i) {
    state[static_cast<std::size_t>(i)] = x[i];
    state[static_cast<std::size_t>(n + i)] = x[i] + y[i];
    state[static_cast<std::size_t>(2 * n + i)] = x[i] + z[i];
  }

  PairRatioTrace trace;
  trace.seed = x;
  trace.offset_y = y;
  trace.offset_z = z;

  detail::Rk4Driver driver(dim, rhs, control);

  auto record = [&](double t) {
    Vec p0(n), py(n), pz(n);
    for (int i = 0; i < n; ++i) {
      p0[i] = state[static_cast<std::size_t>(i)];
      py[i] = state[static_cast<std::size_t>(n + i)];
      pz[i] = state[static_cast<std::size_t>(2 * n + i)];
    }
    const Vec a = py - p0;
    const Vec b = pz - p0;
    const double na2 = a.dot(a), nb2 = b.dot(b);
    if (na2 < 1e-28 || nb2 < 1e-28)
      throw DegeneracyError("pair ratio trajectories collided");
    const Vec d = field.velocity(t, py) - field.velocity(t, p0);
    const Vec e = field.velocity(t, pz) - field.velocity(t, p0);
    trace.times.push_back(t);
    trace.ratio.push_back(std::sqrt(na2 / nb2));
    trace.rhs.push_back(a.dot(d) / na2 - b.dot(e) / nb2);
    trace.a.push_back(a);
    trace.b.push_back(b);
  };

  record(0.0);
  double t_cur = 0.0;
  for (int k = 1; k <= output_nodes; ++k) {
    const double t_next = t_end * k / output_nodes;
    driver.advance(t_cur, t_next, state);
    t_cur = t_next;
    record(t_next);
  }
  return trace;
}

double pair_ratio_identity_gap(const PairRatioTrace& trace) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < trace.times.size(); ++k) {
    const double dt = trace.times[k + 1] - trace.times[k - 1];
    const double fd = (std::log(trace.ratio[k + 1]) - std::log(trace.ratio[k - 1])) / dt;
    worst = std::max(worst, std::abs(fd - trace.rhs[k]));
  }
  return worst;
}

}  // namespace qcflow
