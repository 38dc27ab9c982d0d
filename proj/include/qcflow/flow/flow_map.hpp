#pragma once

// Forward and backward flow maps of a vector field, integrated per seed with
// classical RK4 plus Richardson step-halving against an absolute per-step
// tolerance. Trajectories optionally carry the variational Jacobian matrix
// M(t) (dM/dt = Db M), the scalar log-Jacobian (dlogJ/dt = div b), and the
// running integral of 2|S_A b| along the path.

#include <vector>

#include "qcflow/field/vector_field.hpp"

namespace qcflow {

struct StepControl {
  double abs_tol = 1e-9;   // per-step Richardson error tolerance
  double initial_dt = 1e-2;
  double min_dt = 1e-12;   // below this the integration is declared stiff
  double max_dt = 0.25;
};

struct TrajectoryOptions {
  int output_nodes = 16;               // recorded nodes after the seed
  bool with_jacobian = false;          // n x n variational matrix
  bool with_scalar_jacobian = false;   // log J from the divergence ODE
  bool with_anticonformal = false;     // integral of 2|S_A b| along the path
};

// Time nodes are stored in traversal order: increasing s -> t for forward
// trajectories, decreasing t -> s for backward ones, so positions[0] is
// always the seed and jacobians[0] the identity.
struct FlowTrajectory {
  Vec seed;
  bool forward = true;
  std::vector<double> times;
  std::vector<Vec> positions;
  std::vector<Mat> jacobians;
  std::vector<double> log_jacobian;
  std::vector<double> anticonformal_integral;

  const Vec& final_position() const { return positions.back(); }
};

// phi_{s,t}: seeds given at time s, integrated up to t.
std::vector<FlowTrajectory> integrate_forward(const VectorField& field, double s,
                                              double t, std::span<const Vec> seeds,
                                              const StepControl& control = {},
                                              const TrajectoryOptions& options = {});

// Backward flow phi~_{s,t}: seeds given at time t, integrated down to s.
std::vector<FlowTrajectory> integrate_backward(const VectorField& field, double s,
                                               double t, std::span<const Vec> seeds,
                                               const StepControl& control = {},
                                               const TrajectoryOptions& options = {});

// Endpoint-only convenience wrappers.
Vec flow_endpoint(const VectorField& field, double s, double t, const Vec& seed,
                  const StepControl& control = {});
Vec backward_flow_endpoint(const VectorField& field, double s, double t,
                           const Vec& seed, const StepControl& control = {});

// Re-integrates the trajectory's window with the variational and scalar
// Jacobian equations attached.
FlowTrajectory propagate_jacobian(const VectorField& field,
                                  const FlowTrajectory& trajectory,
                                  const StepControl& control = {});

// max over seeds of | phi~_{s,t}(phi_{s,t}(x)) - x |.
double verify_inverse(const VectorField& field, std::span<const Vec> seeds, double s,
                      double t, const StepControl& control = {});

// Lattice of count x count seeds at cell centers of the box (dimension 2).
std::vector<Vec> seed_lattice(const Box& box, int count_per_axis);

}  // namespace qcflow
