#pragma once

// Time-dependent velocity fields b(t, x) and their differential invariants.
// Analytic builtins supply exact gradients; sampled fields fall back to
// central differences. All evaluation is const and safe to call from many
// threads once a field is constructed.

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qcflow/core/errors.hpp"
#include "qcflow/core/linalg.hpp"

namespace qcflow {

// Trace-free symmetric part of the velocity gradient and its operator norm.
struct AnticonformalPart {
  Mat matrix;
  double operator_norm = 0.0;
};

class VectorField {
 public:
  virtual ~VectorField() = default;

  virtual int dimension() const = 0;

  // Time interval [0, t_max] on which the field is declared.
  virtual double t_max() const { return 10.0; }

  virtual Vec velocity(double t, const Vec& x) const = 0;

  virtual bool has_analytic_derivative() const { return false; }

  // Gradient matrix Db(t,x); default is a central difference with fd_step().
  virtual Mat derivative(double t, const Vec& x) const;

  virtual double divergence(double t, const Vec& x) const {
    return derivative(t, x).trace();
  }

  // Analytic sup-norm of S_A b(t,.) when the field knows it, for uniform
  // distortion bounds; sampled proxies are used otherwise.
  virtual std::optional<double> anticonformal_sup(double /*t*/) const {
    return std::nullopt;
  }

  // Exact flow map phi_{s,t}, available for most builtins as a test oracle
  // and for fast composition experiments.
  virtual bool has_exact_flow() const { return false; }
  virtual Vec exact_flow(double /*s*/, double /*t*/, const Vec& /*x*/) const {
    throw ArgumentError("field has no closed-form flow");
  }

  // Spatial domain on which velocity() may be called. Unbounded by default.
  virtual Box domain() const {
    return Box::cube(dimension(), -1e30, 1e30);
  }

  double fd_step() const { return fd_step_; }
  void set_fd_step(double h) {
    if (!(h > 0)) throw ArgumentError("finite-difference step must be positive");
    fd_step_ = h;
  }

 protected:
  // Default stencil width: 1e-4 of a nominal O(1) domain scale.
  double fd_step_ = 1e-4;
};

using FieldPtr = std::shared_ptr<const VectorField>;

// S_A b = (Db + Db^t)/2 - (div b / n) I at (t, x), with its operator norm.
AnticonformalPart anticonformal_part(const VectorField& field, double t, const Vec& x);

// Sampled sup over Halton points in sample_box of |b(t,x)| / (1+|x| log+|x|).
// log+ u = max(log u, 0), natural log.
double growth_functional(const VectorField& field, double t, const Box& sample_box,
                         int sample_count);

// Max over probes (x, h) of |b(x+h) + b(x-h) - 2 b(x)| / |h|.
double zygmund_seminorm(const VectorField& field, double t,
                        std::span<const std::pair<Vec, Vec>> probes);

// Sampled max of |S_A b(t, .)| over a lattice in box (proxy for the L^inf
// norm when no analytic value exists).
double sampled_anticonformal_sup(const VectorField& field, double t, const Box& box,
                                 int samples_per_axis);

inline double log_plus(double u) { return u > 1.0 ? std::log(u) : 0.0; }

}  // namespace qcflow
