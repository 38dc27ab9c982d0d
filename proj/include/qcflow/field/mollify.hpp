#pragma once

// Spatial mollification b_eps(t,x) = integral of b(t, x-y) rho_eps(y) dy with
// the classical bump profile rho(x) = c exp(-1/(1-|x|^2)) on the unit ball.
// Quadrature: tensor-product midpoint rule on the bounding box of the
// eps-ball, masked by the ball, normalized numerically so the discrete
// weights sum to one. Node/weight tables are precomputed at construction.

#include <vector>

#include "qcflow/field/vector_field.hpp"

namespace qcflow {

class MollifierSpec {
 public:
  // nodes_per_axis is the midpoint-rule resolution (default 9 per axis).
  explicit MollifierSpec(int dim, double epsilon, int nodes_per_axis = 9);

  int dim() const { return dim_; }
  double epsilon() const { return epsilon_; }
  const std::vector<Vec>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // Discrete integral of rho_eps against the quadrature rule (1 by
  // construction; exposed so tests can assert the normalization).
  double weight_sum() const;

  // Unnormalized bump profile on the unit ball.
  static double profile(double r2) {
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
  }

 private:
  int dim_;
  double epsilon_;
  std::vector<Vec> nodes_;      // offsets y in the eps-ball
  std::vector<double> weights_; // rho_eps(y) * cell volume, normalized
};

// b_eps as a field; derivative commutes with mollification when the base
// field has an analytic gradient. The evaluable domain shrinks by eps.
FieldPtr mollify(FieldPtr field, const MollifierSpec& spec);

}  // namespace qcflow
