// AVX2 variants of the scalar kernels; compiled with -mavx2 -mfma and only
// dispatched to when CPUID reports support. Lane partials are combined after
// the loop, so sums here may differ from the scalar reference by rounding.

#ifdef QCFLOW_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

#include "qcflow/kernels/kernels.hpp"

namespace qcflow::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(std::span<const double> v) {
  const std::size_t m = v.size();
  std::size_t j = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; j + 4 <= m; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v.data() + j));
  double s = hsum(acc);
  for (; j < m; ++j) s += v[j];
  return s;
}

double abs_dev_sum_avx2(std::span<const double> v, double center) {
  const __m256d c = _mm256_set1_pd(center);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const std::size_t m = v.size();
  std::size_t j = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; j + 4 <= m; j += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v.data() + j), c);
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  double s = hsum(acc);
  for (; j < m; ++j) s += std::abs(v[j] - center);
  return s;
}

std::pair<double, double> minmax_avx2(std::span<const double> v) {
  const std::size_t m = v.size();
  double lo = v[0], hi = v[0];
  std::size_t j = 0;
  if (m >= 4) {
    __m256d vlo = _mm256_loadu_pd(v.data());
    __m256d vhi = vlo;
    for (j = 4; j + 4 <= m; j += 4) {
      const __m256d x = _mm256_loadu_pd(v.data() + j);
      vlo = _mm256_min_pd(vlo, x);
      vhi = _mm256_max_pd(vhi, x);
    }
    alignas(32) double blo[4], bhi[4];
    _mm256_store_pd(blo, vlo);
    _mm256_store_pd(bhi, vhi);
    lo = std::min(std::min(blo[0], blo[1]), std::min(blo[2], blo[3]));
    hi = std::max(std::max(bhi[0], bhi[1]), std::max(bhi[2], bhi[3]));
  }
  for (; j < m; ++j) {
    lo = std::min(lo, v[j]);
    hi = std::max(hi, v[j]);
  }
  return {lo, hi};
}

void biot_savart_avx2(double tx, double ty, std::span<const double> sx,
                      std::span<const double> sy, std::span<const double> w,
                      double cutoff2, double& vx, double& vy) {
  const __m256d vtx = _mm256_set1_pd(tx);
  const __m256d vty = _mm256_set1_pd(ty);
  const __m256d vcut = _mm256_set1_pd(cutoff2);
  __m256d ax = _mm256_setzero_pd();
  __m256d ay = _mm256_setzero_pd();
  const std::size_t m = sx.size();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d dx = _mm256_sub_pd(vtx, _mm256_loadu_pd(sx.data() + j));
    const __m256d dy = _mm256_sub_pd(vty, _mm256_loadu_pd(sy.data() + j));
    const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d keep = _mm256_cmp_pd(r2, vcut, _CMP_GT_OQ);
    // masked lanes contribute 0; division by a masked r2 is safe because the
    // product is zeroed before accumulation
    const __m256d f =
        _mm256_and_pd(_mm256_div_pd(_mm256_loadu_pd(w.data() + j), r2), keep);
    ax = _mm256_fnmadd_pd(dy, f, ax);
    ay = _mm256_fmadd_pd(dx, f, ay);
  }
  double sx_acc = hsum(ax), sy_acc = hsum(ay);
  for (; j < m; ++j) {
    const double dx = tx - sx[j];
    const double dy = ty - sy[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 <= cutoff2) continue;
    const double f = w[j] / r2;
    sx_acc -= dy * f;
    sy_acc += dx * f;
  }
  vx += sx_acc;
  vy += sy_acc;
}

inline __m256d int_pow4(__m256d base, int e) {
  __m256d r = _mm256_set1_pd(1.0);
  for (int k = 0; k < e; ++k) r = _mm256_mul_pd(r, base);
  return r;
}

double gagliardo_row_2d_avx2(double x0, double y0, double u0,
                             std::span<const double> xs, std::span<const double> ys,
                             std::span<const double> us, int p_half, int q_half) {
  const __m256d vx0 = _mm256_set1_pd(x0);
  const __m256d vy0 = _mm256_set1_pd(y0);
  const __m256d vu0 = _mm256_set1_pd(u0);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  const std::size_t m = xs.size();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d dx = _mm256_sub_pd(vx0, _mm256_loadu_pd(xs.data() + j));
    const __m256d dy = _mm256_sub_pd(vy0, _mm256_loadu_pd(ys.data() + j));
    const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d du = _mm256_sub_pd(vu0, _mm256_loadu_pd(us.data() + j));
    const __m256d keep = _mm256_cmp_pd(r2, zero, _CMP_GT_OQ);
    const __m256d num = int_pow4(_mm256_mul_pd(du, du), p_half);
    const __m256d term = _mm256_and_pd(_mm256_div_pd(num, int_pow4(r2, q_half)), keep);
    acc = _mm256_add_pd(acc, term);
  }
  double s = hsum(acc);
  for (; j < m; ++j) {
    const double dx = x0 - xs[j];
    const double dy = y0 - ys[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0) continue;
    const double du = u0 - us[j];
    double num = 1.0, den = 1.0;
    for (int k = 0; k < p_half; ++k) num *= du * du;
    for (int k = 0; k < q_half; ++k) den *= r2;
    s += num / den;
  }
  return s;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{sum_avx2, abs_dev_sum_avx2, minmax_avx2,
                                 biot_savart_avx2, gagliardo_row_2d_avx2};
  return table;
}

}  // namespace qcflow::kernels::detail

#endif  // QCFLOW_HAVE_AVX2
