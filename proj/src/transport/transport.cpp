#include "qcflow/transport/transport.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

#include "../flow/rk4_driver.hpp"
#include "qcflow/core/parallel.hpp"
#include "qcflow/flow/bihari.hpp"

namespace qcflow {

namespace {

void check_times(const VectorField& field, const std::vector<double>& times) {
  if (times.empty()) throw ArgumentError("no snapshot times requested");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0 || times[k] > field.t_max())
      throw ArgumentError("snapshot time outside [0, T]");
    if (k > 0 && !(times[k] > times[k - 1]))
      throw ArgumentError("snapshot times must be strictly increasing");
  }
}

}  // namespace

TransportSolution solve(const VectorField& field, const GridFunction& u0,
                        std::vector<double> times, std::vector<SeminormKind> kinds,
                        const SolveOptions& options) {
  const int n = field.dimension();
  if (u0.dim() != n) throw ArgumentError("u0 dimension does not match the field");
  check_times(field, times);

  // S_A b boundedness is an assumption of the composition formula; sample it
  // and warn when the configured budget is exceeded.
  {
    const double sampled = field.anticonformal_sup(times.back() * 0.5)
                               .value_or(sampled_anticonformal_sup(
                                   field, times.back() * 0.5, u0.box(),
                                   options.budget_samples_per_axis));
    if (sampled > options.anticonformal_budget)
      std::cerr << "qcflow: warning: sampled |S_A b| = " << sampled
                << " exceeds the configured budget " << options.anticonformal_budget
                << "; the composition bound may be weak\n";
  }

  TransportSolution sol;
  sol.initial = u0;
  sol.box = options.have_target ? options.target_box : u0.box();
  sol.resolution =
      options.have_target ? options.target_resolution : u0.resolution();
  sol.times = times;

  double bihari_radius = 0.0;
  if (options.check_bihari_radius) {
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      r = std::max(r, std::max(std::abs(sol.box.lo[a]), std::abs(sol.box.hi[a])));
    BihariOptions bo;
    bo.sample_box = Box::cube(n, -10.0, 10.0);
    bihari_radius = apriori_radius_bound(field, r * std::sqrt(double(n)), times.back(), bo);
  }

  const bool matched = !options.have_target;

  for (double t : times) {
    if (t == 0.0) {
      if (matched) {
        sol.snapshots.push_back(u0);
      } else {
        sol.snapshots.push_back(compose_with_map(
            u0, [](const Vec& x) { return x; }, sol.box, sol.resolution,
            options.max_clipped_fraction));
      }
      continue;
    }

    GridFunction snap(sol.box, sol.resolution);
    std::vector<std::uint8_t> clipped(snap.node_count(), 0);
    std::atomic<bool> escaped{false};
    parallel_for(
        0, snap.node_count(),
        [&](std::size_t i) {
          const Vec x = snap.node_position(i);
          std::vector<double> y(static_cast<std::size_t>(n));
          for (int a = 0; a < n; ++a) y[static_cast<std::size_t>(a)] = x[a];
          detail::Rk4Driver driver(
              static_cast<std::size_t>(n),
              [&field, n](double r, std::span<const double> s, std::span<double> ds) {
                Vec p(n);
                for (int a = 0; a < n; ++a) p[a] = s[static_cast<std::size_t>(a)];
                const Vec b = field.velocity(r, p);
                for (int a = 0; a < n; ++a) ds[static_cast<std::size_t>(a)] = b[a];
              },
              options.control);
          driver.advance(t, 0.0, y);  // backward characteristics
          Vec foot(n);
          for (int a = 0; a < n; ++a) foot[a] = y[static_cast<std::size_t>(a)];
          if (bihari_radius > 0.0 && foot.norm() > bihari_radius) escaped = true;
          bool clip = false;
          snap.at(i) = u0.interpolate(foot, &clip);
          clipped[i] = clip ? 1 : 0;
        },
        256);
    if (escaped)
      throw NumericError(
          "backward characteristics escaped the a-priori Bihari radius; "
          "integrator inconsistency");
    std::size_t nclip = 0;
    for (auto c : clipped) nclip += c;
    const double frac =
        static_cast<double>(nclip) / static_cast<double>(snap.node_count());
    if (frac > options.max_clipped_fraction)
      throw CoverageError(frac, "transport snapshot clipped " +
                                    std::to_string(frac * 100.0) + "% of nodes");
    sol.snapshots.push_back(std::move(snap));
  }

  for (SeminormKind kind : kinds) {
    auto& track = sol.seminorm_track[kind];
    for (const GridFunction& snap : sol.snapshots)
      track.push_back(compute_seminorm(snap, kind));
  }
  return sol;
}

double TestFunction::phi(const Vec& x) const {
  const Vec d = x - center;
  const double rho2 = d.dot(d) / (radius * radius);
  if (rho2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - rho2));
}

Vec TestFunction::grad_phi(const Vec& x) const {
  const Vec d = x - center;
  const double rho2 = d.dot(d) / (radius * radius);
  Vec g(x.n);
  if (rho2 >= 1.0) return g;
  const double w = 1.0 - rho2;
  const double f = std::exp(1.0 - 1.0 / w) / (w * w);
  return (-2.0 / (radius * radius) * f) * d;
}

double weak_residual(const VectorField& field, const TransportSolution& solution,
                     const TestFunction& test) {
  if (solution.times.empty() || solution.times.front() != 0.0)
    throw ArgumentError("weak residual needs snapshots starting at t = 0");
  if (!(test.t_end > 0.0)) throw ArgumentError("test function needs t_end > 0");

  // support must sit inside the snapshot box
  for (int a = 0; a < solution.box.dim(); ++a)
    if (test.center[a] - test.radius < solution.box.lo[a] ||
        test.center[a] + test.radius > solution.box.hi[a])
      throw DomainError("test function support leaves the solution box");

  const GridFunction& first = solution.snapshots.front();
  const std::size_t nodes = first.node_count();
  const double cellvol = first.cell_volume();

  // cache phi, grad phi on the lattice
  std::vector<double> phi(nodes);
  std::vector<Vec> gphi(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const Vec x = first.node_position(i);
    phi[i] = test.phi(x);
    gphi[i] = test.grad_phi(x);
  }

  // spatial integrals per time slice
  auto slice_terms = [&](std::size_t k) {
    const GridFunction& u = solution.snapshots[k];
    const double t = solution.times[k];
    return parallel_reduce(
        0, nodes, std::pair<double, double>{0.0, 0.0},
        [&](std::size_t lo, std::size_t hi) {
          double dt_term = 0.0, div_term = 0.0;
          for (std::size_t i = lo; i < hi; ++i) {
            if (phi[i] == 0.0 && gphi[i].norm_inf() == 0.0) continue;
            const Vec x = u.node_position(i);
            const double uv = u.at(i);
            dt_term += uv * phi[i];
            const Vec b = field.velocity(t, x);
            const double divb = field.divergence(t, x);
            div_term += uv * (phi[i] * divb + b.dot(gphi[i]));
          }
          return std::pair<double, double>{dt_term, div_term};
        },
        [](std::pair<double, double> a, std::pair<double, double> b) {
          return std::pair<double, double>{a.first + b.first, a.second + b.second};
        },
        4096);
  };

  // trapezoid in time over the slices
  double time_integral = 0.0;
  std::vector<std::pair<double, double>> terms(solution.times.size());
  for (std::size_t k = 0; k < solution.times.size(); ++k) terms[k] = slice_terms(k);
  for (std::size_t k = 0; k + 1 < solution.times.size(); ++k) {
    const double t0 = solution.times[k], t1 = solution.times[k + 1];
    const double f0 = terms[k].first * test.dpsi(t0) + terms[k].second * test.psi(t0);
    const double f1 =
        terms[k + 1].first * test.dpsi(t1) + terms[k + 1].second * test.psi(t1);
    time_integral += 0.5 * (t1 - t0) * (f0 + f1);
  }

  // initial term: integral of u0 phi psi(0) over the snapshot lattice
  double init_term = 0.0;
  for (std::size_t i = 0; i < nodes; ++i)
    init_term += first.at(i) * phi[i];
  init_term *= test.psi(0.0);

  return std::abs((time_integral + init_term) * cellvol);
}

ContinuityTrack vmo_continuity_track(const VectorField& field, const GridFunction& u0,
                                     std::vector<double> times,
                                     const SolveOptions& options) {
  const TransportSolution sol = solve(field, u0, std::move(times), {}, options);
  ContinuityTrack track;
  for (std::size_t k = 0; k + 1 < sol.snapshots.size(); ++k) {
    const auto& a = sol.snapshots[k].values();
    const auto& b = sol.snapshots[k + 1].values();
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      sup = std::max(sup, std::abs(a[i] - b[i]));
    track.sup_differences.push_back(sup);
    track.max_difference = std::max(track.max_difference, sup);
  }
  return track;
}

}  // namespace qcflow
