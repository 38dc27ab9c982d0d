#include <cmath>

#include "doctest.h"
#include "qcflow/vorticity/biot_savart.hpp"

using namespace qcflow;

namespace {

// Independent oracle: the Biot-Savart integral of the unit disc evaluated by
// fine polar quadrature around the origin (no lattice involved).
Vec disc_velocity_quadrature(const Vec& probe) {
  const int nr = 1500, nth = 1500;
  double vx = 0.0, vy = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double rho = (i + 0.5) / nr;
    for (int j = 0; j < nth; ++j) {
      const double th = 2.0 * M_PI * (j + 0.5) / nth;
      const double yx = rho * std::cos(th), yy = rho * std::sin(th);
      const double zx = probe[0] - yx, zy = probe[1] - yy;
      const double r2 = zx * zx + zy * zy;
      if (r2 < 1e-12) continue;
      const double area = rho * (1.0 / nr) * (2.0 * M_PI / nth);
      vx += -zy / (2.0 * M_PI * r2) * area;
      vy += zx / (2.0 * M_PI * r2) * area;
    }
  }
  return Vec(vx, vy);
}

GridFunction two_blobs(const Box& box, int n, double sep, double sigma) {
  return gaussian_vorticity(box, {n, n},
                            {{Vec(-sep / 2.0, 0.0), sigma, 1.0},
                             {Vec(sep / 2.0, 0.0), sigma, 1.0}});
}

struct Moments {
  double mass, cx, cy, angle, separation;
};

// Blob-pair geometry from vorticity moments: the principal axis of the
// central second moment gives the pair angle, the eigenvalue gap the
// separation (two equal isotropic blobs at distance d add d^2/4 along the
// pair axis).
Moments pair_moments(const GridFunction& omega) {
  double m = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < omega.node_count(); ++i) {
    const Vec p = omega.node_position(i);
    const double w = omega.at(i);
    m += w;
    sx += w * p[0];
    sy += w * p[1];
  }
  const double cx = sx / m, cy = sy / m;
  double mxx = 0, myy = 0, mxy = 0;
  for (std::size_t i = 0; i < omega.node_count(); ++i) {
    const Vec p = omega.node_position(i);
    const double w = omega.at(i);
    mxx += w * (p[0] - cx) * (p[0] - cx);
    myy += w * (p[1] - cy) * (p[1] - cy);
    mxy += w * (p[0] - cx) * (p[1] - cy);
  }
  mxx /= m;
  myy /= m;
  mxy /= m;
  const double angle = 0.5 * std::atan2(2.0 * mxy, mxx - myy);
  const double tr = mxx + myy;
  const double det = mxx * myy - mxy * mxy;
  const double gap = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lam1 = tr / 2.0 + gap, lam2 = tr / 2.0 - gap;
  return {m, cx, cy, angle, 2.0 * std::sqrt(std::max(0.0, lam1 - lam2))};
}

}  // namespace

TEST_SUITE("biot_savart") {

TEST_CASE("closed-form disc profile agrees with the polar quadrature oracle") {
  // inside: v_theta = r/2; outside: 1/(2r)
  const Vec inside = disc_velocity_quadrature(Vec(0.5, 0.0));
  CHECK(inside[1] == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(std::abs(inside[0]) < 1e-3);
  const Vec outside = disc_velocity_quadrature(Vec(1.5, 0.0));
  CHECK(outside[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("lattice sum reproduces the disc profile at probe radii") {
  const Box box = Box::cube(2, -2.5, 2.5);
  const GridFunction disc = disc_vorticity(box, {256, 256});
  const double h = disc.spacing(0);
  for (double r : {0.25, 0.5, 1.5, 2.0}) {
    const double snapped =
        box.lo[0] + (std::floor((r - box.lo[0]) / h) + 0.5) * h;
    const Vec probe(snapped, box.lo[1] + (std::floor((0.0 - box.lo[1]) / h) + 0.5) * h);
    const double rr = probe.norm();
    const double expected = rr <= 1.0 ? rr / 2.0 : 1.0 / (2.0 * rr);
    CHECK(biot_savart_at(disc, probe).norm() ==
          doctest::Approx(expected).epsilon(1.5e-2));
  }
}

TEST_CASE("zero vorticity gives zero velocity") {
  const GridFunction zero(Box::cube(2, -1.0, 1.0), std::vector<int>{64, 64});
  GridFunction vx, vy;
  velocity_from_vorticity(zero, vx, vy, ConvolutionPath::direct);
  for (double v : vx.values()) CHECK(v == 0.0);
  for (double v : vy.values()) CHECK(v == 0.0);
}

TEST_CASE("odd vorticity: v1 odd / v2 even under the x1 mirror") {
  // omega(x) = x1 * bump(|x|) is odd in x1 on a symmetric lattice
  const int n = 96;
  const GridFunction omega = GridFunction::sample(
      Box::cube(2, -2.0, 2.0), {n, n}, [](const Vec& x) {
        const double r2 = x.dot(x);
        return r2 >= 1.0 ? 0.0 : x[0] * std::exp(1.0 - 1.0 / (1.0 - r2));
      });
  GridFunction vx, vy;
  velocity_from_vorticity(omega, vx, vy, ConvolutionPath::direct);
  double scale = 0.0;
  for (double v : vx.values()) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t a = static_cast<std::size_t>(i) * n + j;
      const std::size_t b = static_cast<std::size_t>(n - 1 - i) * n + j;
      CHECK(std::abs(vx.at(a) + vx.at(b)) <= 1e-12 * scale);  // v1 odd
      CHECK(std::abs(vy.at(a) - vy.at(b)) <= 1e-12 * scale);  // v2 even
    }
}

TEST_CASE("direct summation and the FFT convolution agree to rounding") {
  const GridFunction omega = two_blobs(Box::cube(2, -1.6, 1.6), 96, 0.8, 0.18);
  GridFunction dvx, dvy, fvx, fvy;
  velocity_from_vorticity(omega, dvx, dvy, ConvolutionPath::direct);
  velocity_from_vorticity(omega, fvx, fvy, ConvolutionPath::fft);
  double worst = 0.0;
  for (std::size_t i = 0; i < dvx.node_count(); ++i) {
    worst = std::max(worst, std::abs(dvx.at(i) - fvx.at(i)));
    worst = std::max(worst, std::abs(dvy.at(i) - fvy.at(i)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("divergence of the reconstruction shrinks at second order") {
  // The kernel-summed velocity is not discretely divergence-free; the
  // central-difference divergence carries an O(h^2) bias for smooth data.
  std::vector<double> ratio;
  for (int n : {128, 256}) {
    const GridFunction omega = gaussian_vorticity(Box::cube(2, -2.5, 2.5), {n, n},
                                                  {{Vec(0.0, 0.0), 0.45, 1.0}});
    GridFunction vx, vy;
    velocity_from_vorticity(omega, vx, vy, ConvolutionPath::fft);
    double vmax = 0.0;
    for (double v : vx.values()) vmax = std::max(vmax, std::abs(v));
    ratio.push_back(max_interior_divergence(vx, vy) / vmax);
  }
  CHECK(ratio[0] / ratio[1] > 3.0);  // ~4 per refinement
  CHECK(ratio[1] < 1e-3);            // measured ~5e-4 at 256^2
}

TEST_CASE("support touching the boundary band is rejected") {
  const GridFunction wide = disc_vorticity(Box::cube(2, -1.05, 1.05), {64, 64});
  GridFunction vx, vy;
  CHECK_THROWS_AS(velocity_from_vorticity(wide, vx, vy), SupportError);
}

TEST_CASE("step-size guard rejects dt beyond half a cell") {
  const GridFunction omega = disc_vorticity(Box::cube(2, -2.5, 2.5), {64, 64});
  CHECK_THROWS_AS(evolve_vorticity(omega, 1.0, 2), ArgumentError);
}

TEST_CASE("evolution conserves circulation and obeys the maximum principle") {
  // resampling loses mass at O(h) per unit time; this run sits well inside
  // the 1e-3 budget and the refinement pair pins the first-order decay
  auto run = [](int n) {
    const GridFunction omega0 = two_blobs(Box::cube(2, -2.4, 2.4), n, 0.9, 0.3);
    return evolve_vorticity(omega0, 0.01, 20);
  };
  const auto states = run(256);
  const auto diag = vorticity_diagnostics(states);
  const double gamma0 = diag.front().circulation;
  for (const auto& row : diag) {
    CHECK(std::abs(row.circulation - gamma0) <= 1e-3 * std::abs(gamma0));
    CHECK(row.max_abs_omega <= diag.front().max_abs_omega + 1e-14);
  }
  // max |omega| is nonincreasing step to step
  for (std::size_t k = 1; k < diag.size(); ++k)
    CHECK(diag[k].max_abs_omega <= diag[k - 1].max_abs_omega + 1e-14);

  const auto coarse = vorticity_diagnostics(run(128));
  const double drift_fine = std::abs(diag.back().circulation - gamma0);
  const double drift_coarse =
      std::abs(coarse.back().circulation - coarse.front().circulation);
  CHECK(drift_coarse / drift_fine > 1.5);  // ~2 for O(h)
}

TEST_CASE("radial vorticity is a discrete steady state") {
  const GridFunction omega0 = gaussian_vorticity(Box::cube(2, -2.5, 2.5), {256, 256},
                                                 {{Vec(0.0, 0.0), 0.45, 1.0}});
  GridFunction vx, vy;
  velocity_from_vorticity(omega0, vx, vy);
  double vmax = 0.0;
  for (double v : vx.values()) vmax = std::max(vmax, std::abs(v));
  for (double v : vy.values()) vmax = std::max(vmax, std::abs(v));
  // foot displacements ~1% of a cell keep the resampling bias ~4e-4 here
  const double dt = 0.01 * omega0.spacing(0) / vmax;
  EvolveOptions eo;
  eo.record_every = 40;
  const auto states = evolve_vorticity(omega0, dt, 40, eo);
  double sup = 0.0;
  for (std::size_t i = 0; i < omega0.node_count(); ++i)
    sup = std::max(sup, std::abs(states.back().omega.at(i) - omega0.at(i)));
  CHECK(sup < 1e-3);
}

TEST_CASE("two same-sign vortices co-rotate at the point-vortex rate") {
  const double sep = 0.8, sigma = 0.18;
  const GridFunction omega0 = two_blobs(Box::cube(2, -1.6, 1.6), 256, sep, sigma);
  const double gamma_total = omega0.integral();
  // point-vortex pair: angular rate Gamma_total / (2 pi d^2)
  const double rate_oracle = gamma_total / (2.0 * M_PI * sep * sep);

  const double dt = 0.05;
  const int steps = 80;
  EvolveOptions eo;
  eo.record_every = 8;
  const auto states = evolve_vorticity(omega0, dt, steps, eo);

  const Moments m0 = pair_moments(states.front().omega);
  CHECK(m0.separation == doctest::Approx(sep).epsilon(0.05));

  double prev_angle = m0.angle;
  double total_advance = 0.0;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const Moments mk = pair_moments(states[k].omega);
    CHECK(mk.separation == doctest::Approx(sep).epsilon(0.02));  // constant within 2%
    double d = mk.angle - prev_angle;
    while (d < -M_PI / 2) d += M_PI;  // principal-axis angle lives mod pi
    while (d > M_PI / 2) d -= M_PI;
    CHECK(d > 0.0);  // monotone advance
    total_advance += d;
    prev_angle = mk.angle;
  }
  const double rate_measured = total_advance / (steps * dt);
  CHECK(rate_measured == doctest::Approx(rate_oracle).epsilon(0.15));
}

}  // TEST_SUITE
