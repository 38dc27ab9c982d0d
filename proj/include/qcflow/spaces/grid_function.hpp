#pragma once

// Scalar field sampled on a uniform box lattice in R^n (n = 2 or 3). Nodes
// sit at cell centers, so symmetric boxes never place a node on the origin
// (half-cell offset; keeps log|x|-type data finite). Multilinear
// interpolation clamps to the nearest node outside the box and reports
// whether clamping happened.

#include <cstdint>
#include <functional>
#include <vector>

#include "qcflow/core/errors.hpp"
#include "qcflow/core/linalg.hpp"

namespace qcflow {

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const Box& box, std::vector<int> resolution);

  static GridFunction sample(const Box& box, std::vector<int> resolution,
                             const std::function<double(const Vec&)>& f);

  int dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  const std::vector<int>& resolution() const { return res_; }
  std::size_t node_count() const { return values_.size(); }
  double cell_volume() const { return cell_vol_; }
  double spacing(int axis) const { return h_[axis]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double& at(std::size_t flat) { return values_[flat]; }
  double at(std::size_t flat) const { return values_[flat]; }

  // Row-major flat index: axis 0 slowest, last axis fastest.
  std::size_t flat_index(const std::vector<int>& idx) const;
  std::vector<int> unflatten(std::size_t flat) const;

  // Cell-center coordinate of a node.
  double coord(int axis, int i) const { return box_.lo[axis] + (i + 0.5) * h_[axis]; }
  Vec node_position(std::size_t flat) const;

  // Multilinear interpolation; clamps outside the node hull. *clamped is set
  // to true when any coordinate had to be clamped (left untouched otherwise).
  double interpolate(const Vec& x, bool* clamped = nullptr) const;

  void check_finite() const;

  // Midpoint-rule integral: sum of values times cell volume.
  double integral() const;

 private:
  Box box_;
  std::vector<int> res_;
  std::vector<double> values_;
  std::array<double, kMaxDim> h_{};
  double cell_vol_ = 0.0;
};

// Resamples u at the cell centers of a coarser lattice over the same box.
GridFunction restrict_to(const GridFunction& u, const std::vector<int>& new_resolution);

}  // namespace qcflow
