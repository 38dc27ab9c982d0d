#include "qcflow/vorticity/biot_savart.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

#include "qcflow/core/parallel.hpp"
#include "qcflow/kernels/kernels.hpp"
#include "qcflow/spaces/seminorms.hpp"

namespace qcflow {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require_2d(const GridFunction& g, const char* who) {
  if (g.dim() != 2) throw ArgumentError(std::string(who) + " expects a 2D grid");
}

struct SourceArrays {
  std::vector<double> xs, ys, w;  // nonzero cells only, weight = omega * cellvol
};

SourceArrays gather_sources(const GridFunction& omega) {
  SourceArrays s;
  const auto& v = omega.values();
  const double cellvol = omega.cell_volume();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    const Vec p = omega.node_position(i);
    s.xs.push_back(p[0]);
    s.ys.push_back(p[1]);
    s.w.push_back(v[i] * cellvol);
  }
  return s;
}

// FFTW plan execution is thread-safe, planning is not.
std::mutex g_fftw_mutex;

// Circular convolution of the kernel samples with the zero-padded weight
// grid evaluates the same lattice sum as the direct path.
void velocity_fft(const GridFunction& omega, GridFunction& vx, GridFunction& vy) {
  const int nx = omega.resolution()[0];
  const int ny = omega.resolution()[1];
  const int mx = 2 * nx, my = 2 * ny;
  const double hx = omega.spacing(0), hy = omega.spacing(1);
  const double cellvol = omega.cell_volume();
  const std::size_t padded = static_cast<std::size_t>(mx) * my;
  const std::size_t spec = static_cast<std::size_t>(mx) * (my / 2 + 1);

  std::vector<double> real(padded, 0.0);
  std::vector<std::complex<double>> k1_hat(spec), k2_hat(spec), w_hat(spec);

  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fwd = fftw_plan_dft_r2c_2d(mx, my, real.data(),
                               reinterpret_cast<fftw_complex*>(w_hat.data()),
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(mx, my,
                               reinterpret_cast<fftw_complex*>(w_hat.data()),
                               real.data(), FFTW_ESTIMATE);
  }

  auto fill_kernel = [&](int component, std::vector<std::complex<double>>& out) {
    for (int i = 0; i < mx; ++i) {
      const double zx = (i < nx ? i : i - mx) * hx;
      for (int j = 0; j < my; ++j) {
        const double zy = (j < ny ? j : j - my) * hy;
        const double r2 = zx * zx + zy * zy;
        double k = 0.0;
        if (r2 > 0.0) k = (component == 0 ? -zy : zx) / (kTwoPi * r2);
        real[static_cast<std::size_t>(i) * my + j] = k;
      }
    }
    fftw_execute_dft_r2c(fwd, real.data(), reinterpret_cast<fftw_complex*>(out.data()));
  };
  fill_kernel(0, k1_hat);
  fill_kernel(1, k2_hat);

  std::fill(real.begin(), real.end(), 0.0);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      real[static_cast<std::size_t>(i) * my + j] =
          omega.at(static_cast<std::size_t>(i) * ny + j) * cellvol;
  fftw_execute_dft_r2c(fwd, real.data(), reinterpret_cast<fftw_complex*>(w_hat.data()));

  const double scale = 1.0 / (static_cast<double>(mx) * my);
  auto convolve_into = [&](const std::vector<std::complex<double>>& k_hat,
                           GridFunction& out) {
    std::vector<std::complex<double>> prod(spec);
    for (std::size_t i = 0; i < spec; ++i) prod[i] = k_hat[i] * w_hat[i] * scale;
    fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(prod.data()), real.data());
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        out.at(static_cast<std::size_t>(i) * ny + j) =
            real[static_cast<std::size_t>(i) * my + j];
  };
  convolve_into(k1_hat, vx);
  convolve_into(k2_hat, vy);

  std::lock_guard<std::mutex> lock(g_fftw_mutex);
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
}

void velocity_direct(const GridFunction& omega, GridFunction& vx, GridFunction& vy) {
  const SourceArrays src = gather_sources(omega);
  parallel_for(
      0, omega.node_count(),
      [&](std::size_t i) {
        const Vec p = omega.node_position(i);
        double ax = 0.0, ay = 0.0;
        kernels::biot_savart_accumulate(p[0], p[1], src.xs, src.ys, src.w, 0.0, ax, ay);
        vx.at(i) = ax / kTwoPi;
        vy.at(i) = ay / kTwoPi;
      },
      64);
}

}  // namespace

void check_compact_support(const GridFunction& omega, double band_fraction) {
  require_2d(omega, "check_compact_support");
  const int nx = omega.resolution()[0], ny = omega.resolution()[1];
  const int bx = std::max(1, static_cast<int>(std::ceil(band_fraction * nx)));
  const int by = std::max(1, static_cast<int>(std::ceil(band_fraction * ny)));
  const auto [lo, hi] = kernels::minmax(omega.values());
  // 1e-9 of the peak: loose enough to ignore the geometrically decaying
  // frontier cells that semi-Lagrangian resampling deposits, tight enough to
  // catch truncated-Gaussian edges (~1e-7) or genuine support
  const double tol = 1e-9 * std::max(std::abs(lo), std::abs(hi));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const bool band = i < bx || i >= nx - bx || j < by || j >= ny - by;
      if (!band) continue;
      if (std::abs(omega.at(static_cast<std::size_t>(i) * ny + j)) > tol)
        throw SupportError("vorticity support touches the boundary band");
    }
}

void velocity_from_vorticity(const GridFunction& omega, GridFunction& vx,
                             GridFunction& vy, ConvolutionPath path) {
  require_2d(omega, "velocity_from_vorticity");
  check_compact_support(omega);
  vx = GridFunction(omega.box(), omega.resolution());
  vy = GridFunction(omega.box(), omega.resolution());
  if (path == ConvolutionPath::fft)
    velocity_fft(omega, vx, vy);
  else
    velocity_direct(omega, vx, vy);
}

Vec biot_savart_at(const GridFunction& omega, const Vec& point) {
  require_2d(omega, "biot_savart_at");
  const SourceArrays src = gather_sources(omega);
  double ax = 0.0, ay = 0.0;
  kernels::biot_savart_accumulate(point[0], point[1], src.xs, src.ys, src.w, 0.0, ax, ay);
  return Vec(ax / kTwoPi, ay / kTwoPi);
}

double max_interior_divergence(const GridFunction& vx, const GridFunction& vy) {
  const int nx = vx.resolution()[0], ny = vx.resolution()[1];
  const double hx = vx.spacing(0), hy = vx.spacing(1);
  double worst = 0.0;
  for (int i = 1; i < nx - 1; ++i)
    for (int j = 1; j < ny - 1; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * ny + j;
      const double div =
          (vx.at(c + static_cast<std::size_t>(ny)) - vx.at(c - static_cast<std::size_t>(ny))) /
              (2.0 * hx) +
          (vy.at(c + 1) - vy.at(c - 1)) / (2.0 * hy);
      worst = std::max(worst, std::abs(div));
    }
  return worst;
}

std::vector<VorticityState> evolve_vorticity(const GridFunction& omega0, double dt,
                                             int steps, const EvolveOptions& options) {
  require_2d(omega0, "evolve_vorticity");
  if (!(dt > 0.0)) throw ArgumentError("evolution step must be positive");
  if (steps < 1) throw ArgumentError("need at least one evolution step");

  const double cell = std::min(omega0.spacing(0), omega0.spacing(1));
  const int ny = omega0.resolution()[1];

  std::vector<VorticityState> states;
  GridFunction omega = omega0;

  auto make_state = [&](double t) {
    VorticityState st;
    st.t = t;
    st.omega = omega;
    velocity_from_vorticity(omega, st.vx, st.vy, options.path);
    return st;
  };

  VorticityState current = make_state(0.0);
  const auto [vlo_x, vhi_x] = kernels::minmax(current.vx.values());
  const auto [vlo_y, vhi_y] = kernels::minmax(current.vy.values());
  const double vmax0 = std::max(std::max(-vlo_x, vhi_x), std::max(-vlo_y, vhi_y));
  if (dt * vmax0 > options.cell_fraction_guard * cell)
    throw ArgumentError("dt * max|v| exceeds " +
                        std::to_string(options.cell_fraction_guard) +
                        " cells; reduce the step size");
  states.push_back(current);

  for (int step = 1; step <= steps; ++step) {
    const GridFunction& vx = current.vx;
    const GridFunction& vy = current.vy;
    GridFunction next(omega.box(), omega.resolution());
    // one backward RK4 characteristic per node under the frozen velocity
    parallel_for(
        0, next.node_count(),
        [&](std::size_t i) {
          const Vec x = next.node_position(i);
          auto vel = [&](const Vec& p) {
            return Vec(vx.interpolate(p), vy.interpolate(p));
          };
          const Vec k1 = vel(x);
          const Vec k2 = vel(x - (0.5 * dt) * k1);
          const Vec k3 = vel(x - (0.5 * dt) * k2);
          const Vec k4 = vel(x - dt * k3);
          const Vec foot = x - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          next.at(i) = omega.interpolate(foot);
        },
        static_cast<std::size_t>(ny));
    omega = std::move(next);
    current = make_state(step * dt);
    if (step % options.record_every == 0 || step == steps) states.push_back(current);
  }
  return states;
}

std::vector<VorticityDiagnostics> vorticity_diagnostics(
    const std::vector<VorticityState>& states) {
  std::vector<VorticityDiagnostics> rows;
  rows.reserve(states.size());
  for (const auto& st : states) {
    const auto [lo, hi] = kernels::minmax(st.omega.values());
    rows.push_back({st.t, st.omega.integral(), std::max(-lo, hi),
                    bmo_seminorm(st.omega).value});
  }
  return rows;
}

GridFunction disc_vorticity(const Box& box, const std::vector<int>& resolution,
                            double disc_radius, double strength) {
  return GridFunction::sample(box, resolution, [&](const Vec& x) {
    return x.norm() <= disc_radius ? strength : 0.0;
  });
}

GridFunction gaussian_vorticity(const Box& box, const std::vector<int>& resolution,
                                const std::vector<GaussianBlob>& blobs) {
  return GridFunction::sample(box, resolution, [&](const Vec& x) {
    double s = 0.0;
    for (const auto& blob : blobs) {
      const double r2 = (x - blob.center).dot(x - blob.center);
      if (r2 > 16.0 * blob.sigma * blob.sigma) continue;  // exact zero tails
      s += blob.strength * std::exp(-r2 / (blob.sigma * blob.sigma));
    }
    return s;
  });
}

}  // namespace qcflow
