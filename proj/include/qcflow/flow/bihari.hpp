#pragma once

// A-priori trajectory radius via the Bihari comparison: every trajectory
// seeded in B(0, R) stays inside G^{-1}(G(R) + M(t)), where
// G(u) = integral_1^u dr / (1 + r log+ r) and M(t) integrates the sampled
// growth functional of the field over [0, t].

#include "qcflow/field/vector_field.hpp"

namespace qcflow {

struct BihariOptions {
  Box sample_box = Box::cube(2, -10.0, 10.0);  // where the sup is sampled
  int sample_count = 10000;
  int time_nodes = 33;          // composite Simpson nodes for M(t), odd
  double quad_tol = 1e-10;      // adaptive Simpson tolerance for G
  double overflow_radius = 1e12;
};

// G and its inverse (bisection with bracket expansion).
double bihari_G(double u, double quad_tol = 1e-10);
double bihari_G_inverse(double value, double quad_tol = 1e-10,
                        double overflow_radius = 1e12);

double apriori_radius_bound(const VectorField& field, double radius, double t,
                            const BihariOptions& options = {});

}  // namespace qcflow
