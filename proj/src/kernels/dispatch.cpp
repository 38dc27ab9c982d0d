#include <atomic>
#include <cstdlib>
#include <cstring>

#include "qcflow/core/errors.hpp"
#include "qcflow/kernels/kernels.hpp"

namespace qcflow::kernels {

namespace {

enum class Mode : int { auto_detect = 0, scalar = 1, avx2 = 2 };
std::atomic<Mode> g_mode{Mode::auto_detect};

Backend detect() {
  if (const char* env = std::getenv("QCFLOW_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!cpu_supports_avx2())
        throw ConfigError("QCFLOW_KERNELS=avx2 but the CPU lacks AVX2/FMA");
      return Backend::avx2;
    }
  }
#ifdef QCFLOW_HAVE_AVX2
  if (cpu_supports_avx2()) return Backend::avx2;
#endif
  return Backend::scalar;
}

const detail::KernelTable& table() {
  switch (g_mode.load()) {
    case Mode::scalar:
      return detail::scalar_table();
    case Mode::avx2:
#ifdef QCFLOW_HAVE_AVX2
      return detail::avx2_table();
#else
      return detail::scalar_table();
#endif
    default:
      break;
  }
#ifdef QCFLOW_HAVE_AVX2
  static const detail::KernelTable& detected =
      detect() == Backend::avx2 ? detail::avx2_table() : detail::scalar_table();
#else
  static const detail::KernelTable& detected = detail::scalar_table();
#endif
  return detected;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  switch (g_mode.load()) {
    case Mode::scalar:
      return Backend::scalar;
    case Mode::avx2:
#ifdef QCFLOW_HAVE_AVX2
      return Backend::avx2;
#else
      return Backend::scalar;
#endif
    default:
      return detect();
  }
}

void force_backend(Backend b) {
  if (b == Backend::avx2) {
#ifndef QCFLOW_HAVE_AVX2
    throw ConfigError("AVX2 kernels were not built on this platform");
#else
    if (!cpu_supports_avx2()) throw ConfigError("CPU lacks AVX2/FMA support");
#endif
  }
  g_mode.store(b == Backend::avx2 ? Mode::avx2 : Mode::scalar);
}

void reset_backend() { g_mode.store(Mode::auto_detect); }

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum(std::span<const double> v) { return table().sum(v); }

double abs_dev_sum(std::span<const double> v, double center) {
  return table().abs_dev_sum(v, center);
}

std::pair<double, double> minmax(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("minmax over empty span");
  return table().minmax(v);
}

void biot_savart_accumulate(double tx, double ty, std::span<const double> sx,
                            std::span<const double> sy, std::span<const double> w,
                            double cutoff2, double& vx, double& vy) {
  table().biot_savart_accumulate(tx, ty, sx, sy, w, cutoff2, vx, vy);
}

double gagliardo_row_2d(double x0, double y0, double u0, std::span<const double> xs,
                        std::span<const double> ys, std::span<const double> us,
                        int p_half, int q_half) {
  if (p_half < 0 || q_half < 0) throw ArgumentError("negative half-exponent");
  return table().gagliardo_row_2d(x0, y0, u0, xs, ys, us, p_half, q_half);
}

}  // namespace qcflow::kernels
