#include "qcflow/field/mollify.hpp"

#include <cmath>

namespace qcflow {

MollifierSpec::MollifierSpec(int dim, double epsilon, int nodes_per_axis)
    : dim_(dim), epsilon_(epsilon) {
  if (dim < 2 || dim > kMaxDim) throw ArgumentError("unsupported mollifier dimension");
  if (!(epsilon > 0)) throw ArgumentError("mollifier epsilon must be positive");
  if (nodes_per_axis < 3) throw ArgumentError("mollifier needs >= 3 nodes per axis");

  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(nodes_per_axis);
  const double h = 2.0 / nodes_per_axis;  // on the unit ball's bounding box
  double wsum = 0.0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    Vec y(dim);
    for (int axis = dim - 1; axis >= 0; --axis) {
      const int i = static_cast<int>(rem % static_cast<std::size_t>(nodes_per_axis));
      rem /= static_cast<std::size_t>(nodes_per_axis);
      y[axis] = -1.0 + (i + 0.5) * h;
    }
    const double w = profile(y.dot(y));
    if (w <= 0.0) continue;  // masked: outside the ball
    nodes_.push_back(epsilon * y);
    weights_.push_back(w);
    wsum += w;
  }
  // normalize so sum of weights is exactly 1; the eps^n scaling of rho_eps
  // cancels against the quadrature cell volume
  for (double& w : weights_) w /= wsum;
}

double MollifierSpec::weight_sum() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

namespace {

class MollifiedField final : public VectorField {
 public:
  MollifiedField(FieldPtr base, MollifierSpec spec)
      : base_(std::move(base)), spec_(std::move(spec)) {
    if (base_->dimension() != spec_.dim())
      throw ArgumentError("mollifier/field dimension mismatch");
    set_fd_step(base_->fd_step());
  }

  int dimension() const override { return base_->dimension(); }
  double t_max() const override { return base_->t_max(); }

  Vec velocity(double t, const Vec& x) const override {
    Vec acc(dimension());
    const auto& nodes = spec_.nodes();
    const auto& weights = spec_.weights();
    for (std::size_t k = 0; k < nodes.size(); ++k)
      acc += weights[k] * base_->velocity(t, x - nodes[k]);
    return acc;
  }

  bool has_analytic_derivative() const override {
    return base_->has_analytic_derivative();
  }

  Mat derivative(double t, const Vec& x) const override {
    if (!base_->has_analytic_derivative()) return VectorField::derivative(t, x);
    Mat acc(dimension());
    const auto& nodes = spec_.nodes();
    const auto& weights = spec_.weights();
    for (std::size_t k = 0; k < nodes.size(); ++k)
      acc += weights[k] * base_->derivative(t, x - nodes[k]);
    return acc;
  }

  // Averaging is contractive: the mollified sup never exceeds the base sup.
  std::optional<double> anticonformal_sup(double t) const override {
    return base_->anticonformal_sup(t);
  }

  Box domain() const override {
    const Box b = base_->domain();
    if (b.extent(0) > 1e29) return b;  // unbounded base stays unbounded
    return b.shrunk(spec_.epsilon());
  }

 private:
  FieldPtr base_;
  MollifierSpec spec_;
};

}  // namespace

FieldPtr mollify(FieldPtr field, const MollifierSpec& spec) {
  if (!field) throw ArgumentError("mollify: null field");
  return std::make_shared<MollifiedField>(std::move(field), spec);
}

}  // namespace qcflow
