#pragma once

// Discrete seminorms on grid functions. Balls are replaced by dyadic cubes
// (lattice-aligned, side a power of two in cells); sup-type quantities are
// exact maxima over the stated discrete families, not true suprema.

#include <string>
#include <vector>

#include "qcflow/spaces/grid_function.hpp"

namespace qcflow {

enum class SeminormKind { bmo, vmo, w1n, gagliardo };

struct SeminormResult {
  SeminormKind kind;
  double value = 0.0;
  std::vector<int> resolution;
  std::string family;     // cube/ball family or exponent descriptor
  double delta = 0.0;     // VMO scale cap (cells)
  double s = 0.0, p = 0.0;  // Gagliardo exponents
};

std::string seminorm_kind_name(SeminormKind k);
SeminormKind parse_seminorm_kind(const std::string& name);

// Max mean oscillation over dyadic cubes with side in [min_scale, max_scale]
// cells (powers of two; min_scale >= 2).
SeminormResult bmo_seminorm(const GridFunction& u, int min_scale_cells = 2,
                            int max_scale_cells = 0 /* 0 = full grid */);

// BMO restricted to cubes of side <= delta_cells.
SeminormResult vmo_modulus(const GridFunction& u, int delta_cells);

// (sum |grad_h u|^n cellvol)^{1/n}; central differences inside, one-sided at
// the boundary ring.
SeminormResult w1n_seminorm(const GridFunction& u);

// Diagonal Gagliardo double sum
//   ( sum_{x != y} |u(x)-u(y)|^p / |x-y|^{n+sp} cellvol^2 )^{1/p},
// guarded against O(N^2) blowup: grids above node_guard nodes are rejected
// with a size error instructing subsampling.
SeminormResult gagliardo_seminorm(const GridFunction& u, double s, double p,
                                  std::size_t node_guard = 0 /* 0 = 64^n */);

SeminormResult compute_seminorm(const GridFunction& u, SeminormKind kind,
                                double vmo_delta_cells = 8.0, double s = 0.5,
                                double p = 4.0);

// v(x) = u(inverse_map(x)) on the target lattice with multilinear
// interpolation; image points outside u's box take the nearest-node value.
// More than max_clipped_fraction clipped nodes is a coverage error.
GridFunction compose_with_map(const GridFunction& u,
                              const std::function<Vec(const Vec&)>& inverse_map,
                              const Box& target_box,
                              const std::vector<int>& target_resolution,
                              double max_clipped_fraction = 0.10,
                              double* clipped_fraction_out = nullptr);

}  // namespace qcflow
