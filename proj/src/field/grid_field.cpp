#include "qcflow/field/grid_field.hpp"

#include <cmath>

#include "qcflow/io/binary_io.hpp"

namespace qcflow {

GridVectorField::GridVectorField(Box box, std::vector<int> resolution, double t_min,
                                 double t_max, int time_samples,
                                 std::vector<double> samples)
    : box_(std::move(box)),
      res_(std::move(resolution)),
      t_min_(t_min),
      t_max_(t_max),
      time_samples_(time_samples),
      samples_(std::move(samples)) {
  const int n = box_.dim();
  if (static_cast<int>(res_.size()) != n)
    throw ArgumentError("grid field resolution rank mismatch");
  nodes_per_slice_ = 1;
  for (int axis = 0; axis < n; ++axis) {
    if (res_[axis] < 2) throw ArgumentError("grid field needs >= 2 samples per axis");
    nodes_per_slice_ *= static_cast<std::size_t>(res_[axis]);
  }
  if (time_samples_ < 1) throw ArgumentError("grid field needs >= 1 time sample");
  if (time_samples_ > 1 && !(t_max_ > t_min_))
    throw ArgumentError("grid field time interval is empty");
  const std::size_t expected =
      nodes_per_slice_ * static_cast<std::size_t>(n) * static_cast<std::size_t>(time_samples_);
  if (samples_.size() != expected)
    throw ArgumentError("grid field sample count does not match header");
  // default stencil: 1e-4 of the domain diameter
  set_fd_step(1e-4 * box_.diameter());
}

Vec GridVectorField::slice_velocity(int ti, const Vec& x) const {
  const int n = box_.dim();
  int base[kMaxDim];
  double frac[kMaxDim];
  for (int axis = 0; axis < n; ++axis) {
    const double s = (x[axis] - box_.lo[axis]) / box_.extent(axis) * (res_[axis] - 1);
    const double eps = 1e-9 * (res_[axis] - 1);
    if (s < -eps || s > res_[axis] - 1 + eps)
      throw DomainError("evaluation point outside the sampled-grid domain");
    const double sc = std::min(std::max(s, 0.0), static_cast<double>(res_[axis] - 1));
    base[axis] = std::min(static_cast<int>(sc), res_[axis] - 2);
    frac[axis] = sc - base[axis];
  }
  const std::size_t slice =
      static_cast<std::size_t>(ti) * nodes_per_slice_ * static_cast<std::size_t>(n);
  Vec v(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double wgt = 1.0;
    std::size_t flat = 0;
    for (int axis = 0; axis < n; ++axis) {
      const int bit = (corner >> axis) & 1;
      wgt *= bit ? frac[axis] : 1.0 - frac[axis];
      flat = flat * static_cast<std::size_t>(res_[axis]) +
             static_cast<std::size_t>(base[axis] + bit);
    }
    if (wgt == 0.0) continue;
    const std::size_t off = slice + flat * static_cast<std::size_t>(n);
    for (int c = 0; c < n; ++c) v[c] += wgt * samples_[off + static_cast<std::size_t>(c)];
  }
  return v;
}

Vec GridVectorField::velocity(double t, const Vec& x) const {
  if (time_samples_ == 1) return slice_velocity(0, x);
  const double tc = std::min(std::max(t, t_min_), t_max_);
  const double s = (tc - t_min_) / (t_max_ - t_min_) * (time_samples_ - 1);
  const int ti = std::min(static_cast<int>(s), time_samples_ - 2);
  const double f = s - ti;
  const Vec v0 = slice_velocity(ti, x);
  if (f == 0.0) return v0;
  const Vec v1 = slice_velocity(ti + 1, x);
  return (1.0 - f) * v0 + f * v1;
}

FieldPtr load_grid_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open grid field file '" + path + "'");
  io::expect_magic(is, "QCF1", path);
  const int n = static_cast<int>(io::read_u32(is, "dimension"));
  if (n < 2 || n > kMaxDim) throw IoError("unsupported grid field dimension");
  std::vector<int> res(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) res[i] = static_cast<int>(io::read_u32(is, "resolution"));
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = io::read_f64(is, "axis min");
    hi[i] = io::read_f64(is, "axis max");
  }
  const int tcount = static_cast<int>(io::read_u32(is, "time samples"));
  const double tmin = io::read_f64(is, "t_min");
  const double tmax = io::read_f64(is, "t_max");
  std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(tcount);
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(res[i]);
  std::vector<double> samples(total);
  if (!is.read(reinterpret_cast<char*>(samples.data()),
               static_cast<std::streamsize>(total * sizeof(double))))
    throw IoError("truncated sample block in '" + path + "'");
  return std::make_shared<GridVectorField>(Box(lo, hi), std::move(res), tmin, tmax,
                                           tcount, std::move(samples));
}

void save_grid_field(const std::string& path, const VectorField& field, const Box& box,
                     const std::vector<int>& resolution, double t_min, double t_max,
                     int time_samples) {
  const int n = box.dim();
  if (field.dimension() != n) throw ArgumentError("field/box dimension mismatch");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot create '" + path + "'");
  os.write("QCF1", 4);
  io::write_u32(os, static_cast<std::uint32_t>(n));
  for (int i = 0; i < n; ++i) io::write_u32(os, static_cast<std::uint32_t>(resolution[i]));
  for (int i = 0; i < n; ++i) {
    io::write_f64(os, box.lo[i]);
    io::write_f64(os, box.hi[i]);
  }
  io::write_u32(os, static_cast<std::uint32_t>(time_samples));
  io::write_f64(os, t_min);
  io::write_f64(os, t_max);

  std::size_t nodes = 1;
  for (int i = 0; i < n; ++i) nodes *= static_cast<std::size_t>(resolution[i]);
  for (int ti = 0; ti < time_samples; ++ti) {
    const double t =
        time_samples == 1 ? t_min : t_min + (t_max - t_min) * ti / (time_samples - 1);
    for (std::size_t node = 0; node < nodes; ++node) {
      std::size_t rem = node;
      Vec x(n);
      for (int axis = n - 1; axis >= 0; --axis) {
        const int i = static_cast<int>(rem % static_cast<std::size_t>(resolution[axis]));
        rem /= static_cast<std::size_t>(resolution[axis]);
        x[axis] = box.lo[axis] + box.extent(axis) * i / (resolution[axis] - 1);
      }
      const Vec v = field.velocity(t, x);
      for (int c = 0; c < n; ++c) io::write_f64(os, v[c]);
    }
  }
  if (!os) throw IoError("write failure on '" + path + "'");
}

}  // namespace qcflow
