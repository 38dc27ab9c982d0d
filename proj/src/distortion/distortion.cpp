#include "qcflow/distortion/distortion.hpp"

#include <cmath>
#include <limits>

#include "qcflow/core/sampling.hpp"

namespace qcflow {

std::vector<double> default_radii(double scale) {
  return {1e-1 * scale, 1e-2 * scale, 1e-3 * scale, 1e-4 * scale};
}

DistortionReport measure_ratios(const PointMap& map, int dim, const Vec& x,
                                std::span<const double> radii, int directions) {
  if (radii.empty()) throw ArgumentError("no radii supplied");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] > radii[i + 1]))
      throw ArgumentError("radii must be strictly decreasing");
  if (!(radii.back() > 0.0)) throw ArgumentError("radii must be positive");
  if ((dim == 2 && directions < 8) || (dim == 3 && directions < 26))
    throw ArgumentError("too few probe directions for the sphere scan");

  const std::vector<Vec> dirs = direction_set(dim, directions);
  const Vec center = map(x);

  DistortionReport report;
  report.x = x;
  report.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    double lmax = 0.0;
    double lmin = std::numeric_limits<double>::infinity();
    for (const Vec& u : dirs) {
      const double d = (map(x + r * u) - center).norm();
      lmax = std::max(lmax, d);
      lmin = std::min(lmin, d);
    }
    if (lmin < 1e-14)
      throw DegeneracyError("displacement collapsed below 1e-14 in ratio scan");
    report.ratios.push_back(lmax / lmin);
  }
  return report;
}

double extrapolate_H(DistortionReport& report) {
  const auto& r = report.ratios;
  if (r.size() < 3 || report.radii.front() / report.radii.back() < 100.0)
    throw ArgumentError("need >= 3 radii spanning >= 2 decades");

  const double last = r[r.size() - 1];
  const double prev = r[r.size() - 2];
  report.converged = std::abs(last - prev) < 0.01 * prev;

  // limsup proxy: max over the suffix whose consecutive steps stay within 1%
  double estimate = last;
  double tail_max = last;
  std::size_t k = r.size() - 1;
  while (k > 0 && std::abs(r[k] - r[k - 1]) < 0.01 * r[k - 1]) {
    --k;
    tail_max = std::max(tail_max, r[k]);
  }
  if (report.converged) estimate = tail_max;

  // oscillation guard over the full ladder
  double lo = r[0], hi = r[0];
  for (double v : r) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  report.oscillatory = !report.converged && (hi - lo) > 0.10 * lo;

  report.h_estimate = estimate;
  return estimate;
}

double analytic_K(const PointMap& map, int dim, const Vec& x, double h_fd) {
  Mat d(dim);
  for (int j = 0; j < dim; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h_fd;
    xm[j] -= h_fd;
    const Vec fp = map(xp);
    const Vec fm = map(xm);
    for (int i = 0; i < dim; ++i) d(i, j) = (fp[i] - fm[i]) / (2.0 * h_fd);
  }
  const double det = d.det();
  if (!(det > 0.0)) throw NumericError("map does not preserve orientation (det <= 0)");
  return std::pow(operator_norm(d), dim) / det;
}

void verify_bounds(const VectorField& field, DistortionReport& report,
                   const FlowTrajectory& trajectory) {
  if (trajectory.anticonformal_integral.empty())
    throw ArgumentError("trajectory lacks the anticonformal integral; "
                        "integrate with with_anticonformal set");
  const int n = field.dimension();
  report.pointwise_bound = std::exp(trajectory.anticonformal_integral.back());

  // uniform bound: analytic sup when the field knows it, sampled otherwise
  const auto& times = trajectory.times;
  double integral = 0.0;
  const Box proxy_box = Box::cube(n, -4.0, 4.0);
  auto sup_at = [&](double t) {
    if (const auto s = field.anticonformal_sup(t)) return *s;
    return sampled_anticonformal_sup(field, t, proxy_box, 17);
  };
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double dt = std::abs(times[k + 1] - times[k]);
    integral += 0.5 * dt * (2.0 * sup_at(times[k]) + 2.0 * sup_at(times[k + 1]));
  }
  report.uniform_bound = std::exp((n - 1) * integral);

  if (!std::isfinite(report.pointwise_bound) || !std::isfinite(report.uniform_bound))
    throw NumericError("non-finite distortion bound");

  report.pointwise_pass =
      report.h_estimate <= report.pointwise_bound * (1.0 + report.bound_tol);
  report.uniform_pass =
      report.k_estimate <= report.uniform_bound * (1.0 + report.bound_tol);
}

PointMap flow_point_map(const VectorField& field, double s, double t,
                        const StepControl& control) {
  return [&field, s, t, control](const Vec& x) {
    return flow_endpoint(field, s, t, x, control);
  };
}

}  // namespace qcflow
