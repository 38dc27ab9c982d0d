#pragma once

// Data-parallel inner loops behind the grid machinery: plain scalar reference
// implementations plus AVX2 variants selected at runtime. Both backends
// compute the same quantities; accumulation order differs, so agreement is
// to rounding, not bit-exact. The scalar path is the reference everywhere.
//
// Backend selection: auto-detected via CPUID, overridable with
// force_backend() or the QCFLOW_KERNELS environment variable
// ("scalar" | "avx2" | "auto").

#include <cstddef>
#include <span>
#include <string>
#include <utility>

namespace qcflow::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
void force_backend(Backend b);
void reset_backend();                  // back to auto-detection + env var
bool cpu_supports_avx2();
std::string backend_name(Backend b);

// Sum of v[i].
double sum(std::span<const double> v);

// Sum of |v[i] - center| (mean-oscillation inner loop).
double abs_dev_sum(std::span<const double> v, double center);

// (min, max) over v; v must be nonempty.
std::pair<double, double> minmax(std::span<const double> v);

// Accumulates the 2D Biot-Savart sum at target (tx, ty):
//   vx += sum_j -w[j] * (ty - sy[j]) / r2_j,   vy += sum_j w[j] * (tx - sx[j]) / r2_j
// over sources with r2_j = (tx-sx[j])^2 + (ty-sy[j])^2 > cutoff2; the common
// 1/(2 pi) factor is applied by the caller. cutoff2 = 0 skips exact hits only
// (principal-value convention for lattice-aligned targets).
void biot_savart_accumulate(double tx, double ty, std::span<const double> sx,
                            std::span<const double> sy, std::span<const double> w,
                            double cutoff2, double& vx, double& vy);

// Row of the diagonal Gagliardo double sum in 2D with integer half-exponents:
//   sum_j ((u0-us[j])^2)^p_half / (r2_j)^q_half,  r2_j = (x0-xs[j])^2+(y0-ys[j])^2,
// skipping r2_j == 0. Covers seminorm parameters with even p and even n+sp;
// other parameters take the generic std::pow path in the caller.
double gagliardo_row_2d(double x0, double y0, double u0, std::span<const double> xs,
                        std::span<const double> ys, std::span<const double> us,
                        int p_half, int q_half);

namespace detail {
struct KernelTable {
  double (*sum)(std::span<const double>);
  double (*abs_dev_sum)(std::span<const double>, double);
  std::pair<double, double> (*minmax)(std::span<const double>);
  void (*biot_savart_accumulate)(double, double, std::span<const double>,
                                 std::span<const double>, std::span<const double>,
                                 double, double&, double&);
  double (*gagliardo_row_2d)(double, double, double, std::span<const double>,
                             std::span<const double>, std::span<const double>, int, int);
};
const KernelTable& scalar_table();
#ifdef QCFLOW_HAVE_AVX2
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace qcflow::kernels
