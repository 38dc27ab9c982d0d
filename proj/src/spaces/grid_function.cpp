#include "qcflow/spaces/grid_function.hpp"

#include <cmath>

namespace qcflow {

GridFunction::GridFunction(const Box& box, std::vector<int> resolution)
    : box_(box), res_(std::move(resolution)) {
  if (static_cast<int>(res_.size()) != box_.dim())
    throw ArgumentError("resolution rank does not match box dimension");
  std::size_t total = 1;
  cell_vol_ = 1.0;
  for (int axis = 0; axis < box_.dim(); ++axis) {
    if (res_[axis] < 2) throw ArgumentError("grid resolution must be >= 2 per axis");
    total *= static_cast<std::size_t>(res_[axis]);
    h_[axis] = box_.extent(axis) / res_[axis];
    cell_vol_ *= h_[axis];
  }
  values_.assign(total, 0.0);
}

GridFunction GridFunction::sample(const Box& box, std::vector<int> resolution,
                                  const std::function<double(const Vec&)>& f) {
  GridFunction g(box, std::move(resolution));
  for (std::size_t i = 0; i < g.node_count(); ++i) g.values_[i] = f(g.node_position(i));
  g.check_finite();
  return g;
}

std::size_t GridFunction::flat_index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int axis = 0; axis < dim(); ++axis)
    flat = flat * static_cast<std::size_t>(res_[axis]) + static_cast<std::size_t>(idx[axis]);
  return flat;
}

std::vector<int> GridFunction::unflatten(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(dim()));
  for (int axis = dim() - 1; axis >= 0; --axis) {
    idx[axis] = static_cast<int>(flat % static_cast<std::size_t>(res_[axis]));
    flat /= static_cast<std::size_t>(res_[axis]);
  }
  return idx;
}

Vec GridFunction::node_position(std::size_t flat) const {
  Vec p(dim());
  for (int axis = dim() - 1; axis >= 0; --axis) {
    const int i = static_cast<int>(flat % static_cast<std::size_t>(res_[axis]));
    flat /= static_cast<std::size_t>(res_[axis]);
    p[axis] = coord(axis, i);
  }
  return p;
}

double GridFunction::interpolate(const Vec& x, bool* clamped) const {
  if (x.n != dim()) throw ArgumentError("interpolation point has wrong dimension");
  int base[kMaxDim];
  double frac[kMaxDim];
  for (int axis = 0; axis < dim(); ++axis) {
    // position in node-index space; node i sits at (i + 0.5) h
    const double s = (x[axis] - box_.lo[axis]) / h_[axis] - 0.5;
    if (s <= 0.0) {
      base[axis] = 0;
      frac[axis] = 0.0;
      if (s < 0.0 && clamped) *clamped = true;
    } else if (s >= res_[axis] - 1) {
      base[axis] = res_[axis] - 2;
      frac[axis] = 1.0;
      if (s > res_[axis] - 1 && clamped) *clamped = true;
    } else {
      base[axis] = static_cast<int>(s);
      frac[axis] = s - base[axis];
    }
  }
  const int d = dim();
  double acc = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double wgt = 1.0;
    std::size_t flat = 0;
    for (int axis = 0; axis < d; ++axis) {
      const int bit = (corner >> axis) & 1;
      wgt *= bit ? frac[axis] : 1.0 - frac[axis];
      flat = flat * static_cast<std::size_t>(res_[axis]) +
             static_cast<std::size_t>(base[axis] + bit);
    }
    if (wgt != 0.0) acc += wgt * values_[flat];
  }
  return acc;
}

void GridFunction::check_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) throw NumericError("grid function contains non-finite values");
}

double GridFunction::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * cell_vol_;
}

GridFunction restrict_to(const GridFunction& u, const std::vector<int>& new_resolution) {
  GridFunction g(u.box(), new_resolution);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    g.at(i) = u.interpolate(g.node_position(i));
  return g;
}

}  // namespace qcflow
