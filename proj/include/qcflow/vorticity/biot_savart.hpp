#pragma once

// 2D vorticity demo: velocity reconstruction through the Biot-Savart kernel
// K(z) = (-z2, z1) / (2 pi |z|^2) and a short nonlinear evolution with
// frozen-velocity splitting. The direct O(N^2) lattice sum is the reference;
// the FFT path evaluates the same sum through a zero-padded circular
// convolution and must agree with it to rounding.

#include <vector>

#include "qcflow/core/linalg.hpp"
#include "qcflow/spaces/grid_function.hpp"

namespace qcflow {

enum class ConvolutionPath { direct, fft };

struct VorticityState {
  double t = 0.0;
  GridFunction omega;
  GridFunction vx, vy;  // reconstructed velocity on the same lattice
};

// Boundary band check: the outer 10% ring of cells must be (numerically)
// zero for the free-space convolution to make sense.
void check_compact_support(const GridFunction& omega, double band_fraction = 0.10);

// Velocity on the whole lattice. Self-cell contribution is zero (odd-kernel
// principal value).
void velocity_from_vorticity(const GridFunction& omega, GridFunction& vx,
                             GridFunction& vy,
                             ConvolutionPath path = ConvolutionPath::fft);

// Velocity at one arbitrary point by direct summation (skips exact hits).
Vec biot_savart_at(const GridFunction& omega, const Vec& point);

// Discrete central-difference divergence of (vx, vy), max over interior nodes.
double max_interior_divergence(const GridFunction& vx, const GridFunction& vy);

struct EvolveOptions {
  ConvolutionPath path = ConvolutionPath::fft;
  int record_every = 1;       // keep every k-th state (plus the last)
  double cell_fraction_guard = 0.5;  // require dt * max|v| <= guard * cell
};

// Frozen-velocity splitting: recompute v, trace one backward RK4
// characteristic per node, resample omega by multilinear interpolation.
std::vector<VorticityState> evolve_vorticity(const GridFunction& omega0, double dt,
                                             int steps, const EvolveOptions& options = {});

// Diagnostics row per recorded state: time, total circulation, max |omega|,
// BMO seminorm of omega.
struct VorticityDiagnostics {
  double t, circulation, max_abs_omega, bmo;
};
std::vector<VorticityDiagnostics> vorticity_diagnostics(
    const std::vector<VorticityState>& states);

// Builtin initial vorticities: indicator of a disc, or a sum of Gaussian
// blobs truncated to exact zero outside 4 sigma.
GridFunction disc_vorticity(const Box& box, const std::vector<int>& resolution,
                            double disc_radius = 1.0, double strength = 1.0);
struct GaussianBlob {
  Vec center;
  double sigma;
  double strength;
};
GridFunction gaussian_vorticity(const Box& box, const std::vector<int>& resolution,
                                const std::vector<GaussianBlob>& blobs);

}  // namespace qcflow
