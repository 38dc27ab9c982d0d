#include <cmath>

#include "qcflow/kernels/kernels.hpp"

// Scalar reference kernels. Straight loops, no tricks: these define the
// semantics the SIMD variants are tested against.

namespace qcflow::kernels::detail {
namespace {

double sum_scalar(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double abs_dev_sum_scalar(std::span<const double> v, double center) {
  double s = 0.0;
  for (double x : v) s += std::abs(x - center);
  return s;
}

std::pair<double, double> minmax_scalar(std::span<const double> v) {
  double lo = v[0], hi = v[0];
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

void biot_savart_scalar(double tx, double ty, std::span<const double> sx,
                        std::span<const double> sy, std::span<const double> w,
                        double cutoff2, double& vx, double& vy) {
  double ax = 0.0, ay = 0.0;
  const std::size_t m = sx.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double dx = tx - sx[j];
    const double dy = ty - sy[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 <= cutoff2) continue;
    const double f = w[j] / r2;
    ax -= dy * f;
    ay += dx * f;
  }
  vx += ax;
  vy += ay;
}

double int_pow(double base, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

double gagliardo_row_2d_scalar(double x0, double y0, double u0,
                               std::span<const double> xs, std::span<const double> ys,
                               std::span<const double> us, int p_half, int q_half) {
  double s = 0.0;
  const std::size_t m = xs.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double dx = x0 - xs[j];
    const double dy = y0 - ys[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0) continue;
    const double du = u0 - us[j];
    s += int_pow(du * du, p_half) / int_pow(r2, q_half);
  }
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{sum_scalar, abs_dev_sum_scalar, minmax_scalar,
                                 biot_savart_scalar, gagliardo_row_2d_scalar};
  return table;
}

}  // namespace qcflow::kernels::detail
