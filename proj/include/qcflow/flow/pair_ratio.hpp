#pragma once

// Paired-distortion ratio H_{y,z}(t,x) = |A|/|B| with
//   A = phi_t(x+y) - phi_t(x),  B = phi_t(x+z) - phi_t(x),
// and the logarithmic-derivative right-hand side
//   <A,D>/|A|^2 - <B,E>/|B|^2,  D,E the velocity differences.
// The three trajectories integrate as one coupled system so they share step
// sizes; the recorded trace lets the d log H identity be checked by finite
// differences in time.

#include <vector>

#include "qcflow/field/vector_field.hpp"
#include "qcflow/flow/flow_map.hpp"

namespace qcflow {

struct PairRatioTrace {
  Vec seed, offset_y, offset_z;
  std::vector<double> times;
  std::vector<double> ratio;      // H_{y,z}
  std::vector<double> rhs;        // <A,D>/|A|^2 - <B,E>/|B|^2
  std::vector<Vec> a, b;          // difference vectors at each node
};

PairRatioTrace pair_ratio_trace(const VectorField& field, const Vec& x, const Vec& y,
                                const Vec& z, double t_end,
                                const StepControl& control = {}, int output_nodes = 256);

// Max over interior nodes of |centered d/dt log H - rhs|.
double pair_ratio_identity_gap(const PairRatioTrace& trace);

}  // namespace qcflow
