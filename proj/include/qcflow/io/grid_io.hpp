#pragma once

// QCG1 scalar grid files: same header style as QCF1 field grids.
//   magic "QCG1", u32 dimension, u32 per-axis counts, f64 min/max per axis,
//   f64 node values row-major (axis 0 slowest). Nodes are cell centers.

#include <string>

#include "qcflow/spaces/grid_function.hpp"

namespace qcflow {

void save_grid_function(const std::string& path, const GridFunction& g);
GridFunction load_grid_function(const std::string& path);

}  // namespace qcflow
