#pragma once

// Metric distortion H_phi and analytic distortion K_phi of evaluable point
// maps, plus the exponential bound checks along flow trajectories. Direction
// sets are equispaced on the circle (2D) or a spherical Fibonacci lattice
// (3D); the r -> 0 limsup is approximated by the converged tail of a
// decreasing radius ladder.

#include <functional>
#include <vector>

#include "qcflow/field/vector_field.hpp"
#include "qcflow/flow/flow_map.hpp"

namespace qcflow {

using PointMap = std::function<Vec(const Vec&)>;

struct DistortionReport {
  Vec x;
  std::vector<double> radii;    // decreasing
  std::vector<double> ratios;   // L/l per radius
  double h_estimate = 0.0;
  bool converged = false;       // last two ratios within 1%
  bool oscillatory = false;     // tail oscillation above 10%
  double k_estimate = 0.0;
  double pointwise_bound = 0.0; // exp(int 2|S_A b| along the trajectory)
  double uniform_bound = 0.0;   // exp((n-1) int 2||S_A b||_inf)
  bool pointwise_pass = false;
  bool uniform_pass = false;
  double bound_tol = 0.02;
};

// Default radius ladder {1e-1 .. 1e-4} * scale.
std::vector<double> default_radii(double scale = 1.0);

// Per radius: max/min displacement of the map over the direction set.
// directions >= 8 in 2D, >= 26 in 3D.
DistortionReport measure_ratios(const PointMap& map, int dim, const Vec& x,
                                std::span<const double> radii, int directions);

// Fills h_estimate and the convergence flags; returns the estimate.
double extrapolate_H(DistortionReport& report);

// Finite-difference Dphi at x -> (op norm)^n / det. Orientation must be
// preserved (det > 0).
double analytic_K(const PointMap& map, int dim, const Vec& x, double h_fd = 1e-6);

// Evaluates the pointwise and uniform exponential distortion bounds along a
// trajectory carrying the anticonformal integral (see
// TrajectoryOptions::with_anticonformal) and records pass/fail at the
// report's tolerance.
void verify_bounds(const VectorField& field, DistortionReport& report,
                   const FlowTrajectory& trajectory);

// Flow map phi_{s,t} as an evaluable point map.
PointMap flow_point_map(const VectorField& field, double s, double t,
                        const StepControl& control = {});

}  // namespace qcflow
