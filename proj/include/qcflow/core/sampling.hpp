#pragma once

// Deterministic sample sets: Halton points for quasi-random box sampling,
// equispaced circle directions, spherical Fibonacci lattices.

#include <cstdint>
#include <vector>

#include "qcflow/core/linalg.hpp"

namespace qcflow {

inline double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  for (std::uint64_t i = index + 1; i > 0; i /= base) {
    f /= base;
    r += f * static_cast<double>(i % base);
  }
  return r;
}

// index-th Halton point mapped into the box (bases 2,3,5,7 per axis).
inline Vec halton_point(std::uint64_t index, const Box& box) {
  static constexpr std::uint32_t bases[kMaxDim] = {2, 3, 5, 7};
  Vec p(box.dim());
  for (int i = 0; i < box.dim(); ++i)
    p[i] = box.lo[i] + box.extent(i) * halton(index, bases[i]);
  return p;
}

// Unit directions: equispaced on the circle (n=2) or a spherical Fibonacci
// lattice (n=3). Low-discrepancy coverage of the sphere for sup/inf scans.
std::vector<Vec> direction_set(int dim, int count);

}  // namespace qcflow
