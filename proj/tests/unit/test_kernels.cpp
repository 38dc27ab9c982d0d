#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "qcflow/kernels/kernels.hpp"
#include "qcflow/spaces/seminorms.hpp"

using namespace qcflow;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                  double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

struct BackendGuard {
  ~BackendGuard() { kernels::reset_backend(); }
};

bool avx2_available() {
#ifdef __x86_64__
  return kernels::cpu_supports_avx2();
#else
  return false;
#endif
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar sum and abs_dev_sum match naive loops") {
  const auto v = random_vector(1001, 7);
  BackendGuard guard;
  kernels::force_backend(kernels::Backend::scalar);
  double naive = 0.0, naive_dev = 0.0;
  for (double x : v) {
    naive += x;
    naive_dev += std::abs(x - 0.25);
  }
  CHECK(kernels::sum(v) == doctest::Approx(naive).epsilon(1e-14));
  CHECK(kernels::abs_dev_sum(v, 0.25) == doctest::Approx(naive_dev).epsilon(1e-14));
}

TEST_CASE("minmax agrees with std::minmax_element") {
  const auto v = random_vector(517, 11);
  const auto [lo, hi] = kernels::minmax(v);
  double elo = v[0], ehi = v[0];
  for (double x : v) {
    elo = std::min(elo, x);
    ehi = std::max(ehi, x);
  }
  CHECK(lo == elo);
  CHECK(hi == ehi);
}

TEST_CASE("avx2 variants agree with scalar reference") {
  if (!avx2_available()) return;  // scalar-only host
  BackendGuard guard;

  // sizes straddling the 4-lane boundary, including remainders
  for (std::size_t n : {1u, 3u, 4u, 5u, 64u, 1000u, 1003u}) {
    const auto v = random_vector(n, 1000 + n, -3.0, 3.0);

    kernels::force_backend(kernels::Backend::scalar);
    const double s_sum = kernels::sum(v);
    const double s_dev = kernels::abs_dev_sum(v, 0.7);
    const auto s_mm = kernels::minmax(v);

    kernels::force_backend(kernels::Backend::avx2);
    CHECK(kernels::sum(v) == doctest::Approx(s_sum).epsilon(1e-13));
    CHECK(kernels::abs_dev_sum(v, 0.7) == doctest::Approx(s_dev).epsilon(1e-13));
    const auto a_mm = kernels::minmax(v);
    CHECK(a_mm.first == s_mm.first);   // min/max are exact, order-free
    CHECK(a_mm.second == s_mm.second);
  }
}

TEST_CASE("biot-savart kernel: backends agree and self-cells are skipped") {
  for (std::size_t n : {5u, 128u, 501u}) {
    auto sx = random_vector(n, 21 + n);
    auto sy = random_vector(n, 22 + n);
    auto w = random_vector(n, 23 + n);
    // plant an exact hit that the cutoff must skip
    sx[n / 2] = 0.125;
    sy[n / 2] = -0.5;

    double ref_x = 0.0, ref_y = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = 0.125 - sx[j];
      const double dy = -0.5 - sy[j];
      const double r2 = dx * dx + dy * dy;
      if (r2 <= 0.0) continue;
      ref_x -= dy * w[j] / r2;
      ref_y += dx * w[j] / r2;
    }

    BackendGuard guard;
    for (auto backend : {kernels::Backend::scalar, kernels::Backend::avx2}) {
      if (backend == kernels::Backend::avx2 && !avx2_available()) continue;
      kernels::force_backend(backend);
      double vx = 0.0, vy = 0.0;
      kernels::biot_savart_accumulate(0.125, -0.5, sx, sy, w, 0.0, vx, vy);
      CHECK(vx == doctest::Approx(ref_x).epsilon(1e-12));
      CHECK(vy == doctest::Approx(ref_y).epsilon(1e-12));
      CHECK(std::isfinite(vx));
    }
  }
}

TEST_CASE("gagliardo row kernel: integer powers match std::pow") {
  const std::size_t n = 321;
  const auto xs = random_vector(n, 31);
  const auto ys = random_vector(n, 32);
  const auto us = random_vector(n, 33);
  const double x0 = xs[17], y0 = ys[17], u0 = us[17];  // includes an exact hit

  double ref = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = x0 - xs[j], dy = y0 - ys[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0) continue;
    ref += std::pow(std::abs(u0 - us[j]), 4.0) / std::pow(r2, 2.0);
  }

  BackendGuard guard;
  for (auto backend : {kernels::Backend::scalar, kernels::Backend::avx2}) {
    if (backend == kernels::Backend::avx2 && !avx2_available()) continue;
    kernels::force_backend(backend);
    const double got = kernels::gagliardo_row_2d(x0, y0, u0, xs, ys, us, 2, 2);
    CHECK(got == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("seminorms agree across backends at operation level") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  qcflow::GridFunction u(qcflow::Box::cube(2, -1.0, 1.0), {48, 48});
  for (auto& v : u.values()) v = dist(rng);

  BackendGuard guard;
  kernels::force_backend(kernels::Backend::scalar);
  const double bmo_s = qcflow::bmo_seminorm(u).value;
  const double gag_s = qcflow::gagliardo_seminorm(u, 0.5, 4.0).value;
  kernels::force_backend(kernels::Backend::avx2);
  const double bmo_a = qcflow::bmo_seminorm(u).value;
  const double gag_a = qcflow::gagliardo_seminorm(u, 0.5, 4.0).value;

  CHECK(bmo_a == doctest::Approx(bmo_s).epsilon(1e-13));
  CHECK(gag_a == doctest::Approx(gag_s).epsilon(1e-13));
}

TEST_CASE("backend dispatch reports a valid backend") {
  const auto b = kernels::active_backend();
  CHECK((b == kernels::Backend::scalar || b == kernels::Backend::avx2));
  if (b == kernels::Backend::avx2) CHECK(avx2_available());
  CHECK(kernels::backend_name(b).size() > 0);
}

}  // TEST_SUITE
