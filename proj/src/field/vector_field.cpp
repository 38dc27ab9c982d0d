#include "qcflow/field/vector_field.hpp"

#include <cmath>

#include "qcflow/core/sampling.hpp"

namespace qcflow {

Mat VectorField::derivative(double t, const Vec& x) const {
  const int n = dimension();
  const double h = fd_step_;
  Mat d(n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Vec bp = velocity(t, xp);
    const Vec bm = velocity(t, xm);
    for (int i = 0; i < n; ++i) d(i, j) = (bp[i] - bm[i]) / (2.0 * h);
  }
  return d;
}

AnticonformalPart anticonformal_part(const VectorField& field, double t, const Vec& x) {
  if (t < 0.0 || t > field.t_max())
    throw ArgumentError("time outside the field's declared interval");
  const Mat db = field.derivative(t, x);
  if (!db.finite()) throw NumericError("non-finite velocity gradient");
  const int n = field.dimension();
  const double div_over_n = db.trace() / n;
  Mat s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (db(i, j) + db(j, i));
  for (int i = 0; i < n; ++i) s(i, i) -= div_over_n;
  return AnticonformalPart{s, operator_norm(s)};
}

double growth_functional(const VectorField& field, double t, const Box& sample_box,
                         int sample_count) {
  if (sample_count < 1) throw ArgumentError("sample_count must be >= 1");
  double best = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    const Vec x = halton_point(static_cast<std::uint64_t>(k), sample_box);
    const Vec b = field.velocity(t, x);
    if (!b.finite()) throw NumericError("non-finite field value in growth functional");
    const double r = x.norm();
    best = std::max(best, b.norm() / (1.0 + r * log_plus(r)));
  }
  return best;
}

double zygmund_seminorm(const VectorField& field, double t,
                        std::span<const std::pair<Vec, Vec>> probes) {
  double best = 0.0;
  for (const auto& [x, h] : probes) {
    const double hn = h.norm();
    if (!(hn > 0.0)) throw ArgumentError("zero-length Zygmund probe offset");
    const Vec second = field.velocity(t, x + h) + field.velocity(t, x - h) -
                       2.0 * field.velocity(t, x);
    best = std::max(best, second.norm() / hn);
  }
  return best;
}

double sampled_anticonformal_sup(const VectorField& field, double t, const Box& box,
                                 int samples_per_axis) {
  if (samples_per_axis < 1) throw ArgumentError("need at least one sample per axis");
  const int n = field.dimension();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(samples_per_axis);
  double best = 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    Vec x(n);
    for (int axis = n - 1; axis >= 0; --axis) {
      const int i = static_cast<int>(rem % static_cast<std::size_t>(samples_per_axis));
      rem /= static_cast<std::size_t>(samples_per_axis);
      x[axis] = box.lo[axis] + (i + 0.5) * box.extent(axis) / samples_per_axis;
    }
    best = std::max(best, anticonformal_part(field, t, x).operator_norm);
  }
  return best;
}

}  // namespace qcflow
