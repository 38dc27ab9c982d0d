#include "qcflow/flow/bihari.hpp"

#include <cmath>

namespace qcflow {

namespace {

double g_integrand(double r) { return 1.0 / (1.0 + r * log_plus(r)); }

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g_integrand(lm), frm = g_integrand(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

double integrate_g(double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = g_integrand(a), fm = g_integrand(m), fb = g_integrand(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double bihari_G(double u, double quad_tol) {
  if (!(u > 0)) throw ArgumentError("bihari_G needs a positive argument");
  if (u <= 1.0) return u - 1.0;  // integrand is exactly 1 on (0, 1]
  return integrate_g(1.0, u, quad_tol);
}

double bihari_G_inverse(double value, double quad_tol, double overflow_radius) {
  if (value <= 0.0) return 1.0 + value;  // G is the identity shift below 1
  double hi = 2.0;
  while (bihari_G(hi, quad_tol) < value) {
    hi *= 2.0;
    if (hi > overflow_radius)
      throw UnboundedGrowthError("a-priori radius bound exceeds overflow threshold");
  }
  double lo = hi * 0.5 < 1.0 ? 1.0 : hi * 0.5;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (bihari_G(mid, quad_tol) < value)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double apriori_radius_bound(const VectorField& field, double radius, double t,
                            const BihariOptions& options) {
  if (!(radius > 0)) throw ArgumentError("radius must be positive");
  if (!(t >= 0) || t > field.t_max())
    throw ArgumentError("time outside the field's declared interval");

  Box sample_box = options.sample_box;
  if (sample_box.dim() != field.dimension())
    sample_box = Box::cube(field.dimension(), -10.0, 10.0);
  // sampled-grid fields only evaluate on their own box
  const Box domain = field.domain();
  {
    Vec lo(sample_box.dim()), hi(sample_box.dim());
    for (int i = 0; i < sample_box.dim(); ++i) {
      lo[i] = std::max(sample_box.lo[i], domain.lo[i]);
      hi[i] = std::min(sample_box.hi[i], domain.hi[i]);
      if (!(lo[i] < hi[i]))
        throw ArgumentError("growth sample box does not meet the field domain");
    }
    sample_box = Box(lo, hi);
  }

  // M(t) by composite Simpson over the sampled growth functional
  double m_of_t = 0.0;
  if (t > 0.0) {
    int nodes = options.time_nodes | 1;  // force odd
    if (nodes < 3) nodes = 3;
    const double h = t / (nodes - 1);
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double g =
          growth_functional(field, k * h, sample_box, options.sample_count);
      const double w = (k == 0 || k == nodes - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      acc += w * g;
    }
    m_of_t = acc * h / 3.0;
  }

  return bihari_G_inverse(bihari_G(radius, options.quad_tol) + m_of_t,
                          options.quad_tol, options.overflow_radius);
}

}  // namespace qcflow
