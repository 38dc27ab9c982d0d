#pragma once

// Sampled-grid vector fields, ingested from QCF1 binary files.
//
// QCF1 layout (little-endian):
//   magic "QCF1"
//   u32 dimension n
//   u32 sample count per axis (n values, vertex-centered, >= 2)
//   f64 min/max per axis (n pairs)
//   u32 time sample count (>= 1)
//   f64 t_min, t_max
//   f64 velocity samples, time-major, nodes row-major (axis 0 slowest),
//       component fastest.
//
// Evaluation is multilinear in space and linear in time; time is clamped to
// [t_min, t_max], space outside the box is a domain error.

#include <string>
#include <vector>

#include "qcflow/field/vector_field.hpp"

namespace qcflow {

class GridVectorField final : public VectorField {
 public:
  GridVectorField(Box box, std::vector<int> resolution, double t_min, double t_max,
                  int time_samples, std::vector<double> samples);

  int dimension() const override { return box_.dim(); }
  double t_max() const override { return t_max_; }
  Vec velocity(double t, const Vec& x) const override;
  Box domain() const override { return box_; }

  const std::vector<int>& resolution() const { return res_; }
  int time_samples() const { return time_samples_; }
  double t_min() const { return t_min_; }
  const std::vector<double>& samples() const { return samples_; }

 private:
  Vec slice_velocity(int time_index, const Vec& x) const;

  Box box_;
  std::vector<int> res_;
  double t_min_, t_max_;
  int time_samples_;
  std::vector<double> samples_;
  std::size_t nodes_per_slice_;
};

FieldPtr load_grid_field(const std::string& path);

// Samples an existing field onto a lattice and writes it as QCF1.
void save_grid_field(const std::string& path, const VectorField& field, const Box& box,
                     const std::vector<int>& resolution, double t_min, double t_max,
                     int time_samples);

}  // namespace qcflow
