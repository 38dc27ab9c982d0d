#include "qcflow/field/builtins.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "qcflow/field/grid_field.hpp"

namespace qcflow {

namespace {

class AnalyticField : public VectorField {
 public:
  AnalyticField(int dim, double t_max) : dim_(dim), t_max_(t_max) {
    if (dim < 2 || dim > kMaxDim) throw ArgumentError("unsupported field dimension");
    if (!(t_max > 0)) throw ArgumentError("t_max must be positive");
  }
  int dimension() const override { return dim_; }
  double t_max() const override { return t_max_; }
  bool has_analytic_derivative() const override { return true; }

 private:
  int dim_;
  double t_max_;
};

Mat rotation_generator() {
  Mat j(2);
  j(0, 1) = -1.0;
  j(1, 0) = 1.0;
  return j;
}

class RotationField final : public AnalyticField {
 public:
  explicit RotationField(double t_max) : AnalyticField(2, t_max) {}
  Vec velocity(double, const Vec& x) const override { return Vec(-x[1], x[0]); }
  Mat derivative(double, const Vec&) const override { return rotation_generator(); }
  double divergence(double, const Vec&) const override { return 0.0; }
  std::optional<double> anticonformal_sup(double) const override { return 0.0; }
  bool has_exact_flow() const override { return true; }
  Vec exact_flow(double s, double t, const Vec& x) const override {
    const double a = t - s;
    const double c = std::cos(a), sn = std::sin(a);
    return Vec(c * x[0] - sn * x[1], sn * x[0] + c * x[1]);
  }
};

class DilationField final : public AnalyticField {
 public:
  DilationField(int dim, double t_max) : AnalyticField(dim, t_max) {}
  Vec velocity(double, const Vec& x) const override { return x; }
  Mat derivative(double, const Vec&) const override { return Mat::identity(dimension()); }
  double divergence(double, const Vec&) const override { return dimension(); }
  std::optional<double> anticonformal_sup(double) const override { return 0.0; }
  bool has_exact_flow() const override { return true; }
  Vec exact_flow(double s, double t, const Vec& x) const override {
    return std::exp(t - s) * x;
  }
};

class SpiralField final : public AnalyticField {
 public:
  SpiralField(double a, double c, double t_max) : AnalyticField(2, t_max), a_(a), c_(c) {}
  Vec velocity(double, const Vec& x) const override {
    return Vec(a_ * x[0] - c_ * x[1], c_ * x[0] + a_ * x[1]);
  }
  Mat derivative(double, const Vec&) const override {
    Mat m(2);
    m(0, 0) = a_;
    m(0, 1) = -c_;
    m(1, 0) = c_;
    m(1, 1) = a_;
    return m;
  }
  double divergence(double, const Vec&) const override { return 2.0 * a_; }
  std::optional<double> anticonformal_sup(double) const override { return 0.0; }
  bool has_exact_flow() const override { return true; }
  Vec exact_flow(double s, double t, const Vec& x) const override {
    const double dt = t - s;
    const double g = std::exp(a_ * dt);
    const double co = std::cos(c_ * dt), sn = std::sin(c_ * dt);
    return Vec(g * (co * x[0] - sn * x[1]), g * (sn * x[0] + co * x[1]));
  }

 private:
  double a_, c_;
};

class ShearField final : public AnalyticField {
 public:
  explicit ShearField(double t_max) : AnalyticField(2, t_max) {}
  Vec velocity(double, const Vec& x) const override { return Vec(x[1], 0.0); }
  Mat derivative(double, const Vec&) const override {
    Mat m(2);
    m(0, 1) = 1.0;
    return m;
  }
  double divergence(double, const Vec&) const override { return 0.0; }
  std::optional<double> anticonformal_sup(double) const override { return 0.5; }
  bool has_exact_flow() const override { return true; }
  Vec exact_flow(double s, double t, const Vec& x) const override {
    return Vec(x[0] + (t - s) * x[1], x[1]);
  }
};

class TimeShearField final : public AnalyticField {
 public:
  enum class Profile { sine, cosine, constant };

  TimeShearField(Profile p, double amplitude, double t_max)
      : AnalyticField(2, t_max), profile_(p), amp_(amplitude) {}

  double g(double t) const {
    switch (profile_) {
      case Profile::sine:
        return amp_ * std::sin(t);
      case Profile::cosine:
        return amp_ * std::cos(t);
      default:
        return amp_;
    }
  }
  // integral of g over [s, t]
  double g_integral(double s, double t) const {
    switch (profile_) {
      case Profile::sine:
        return amp_ * (std::cos(s) - std::cos(t));
      case Profile::cosine:
        return amp_ * (std::sin(t) - std::sin(s));
      default:
        return amp_ * (t - s);
    }
  }

  Vec velocity(double t, const Vec& x) const override { return Vec(g(t) * x[1], 0.0); }
  Mat derivative(double t, const Vec&) const override {
    Mat m(2);
    m(0, 1) = g(t);
    return m;
  }
  double divergence(double, const Vec&) const override { return 0.0; }
  std::optional<double> anticonformal_sup(double t) const override {
    return 0.5 * std::abs(g(t));
  }
  bool has_exact_flow() const override { return true; }
  Vec exact_flow(double s, double t, const Vec& x) const override {
    return Vec(x[0] + g_integral(s, t) * x[1], x[1]);
  }

 private:
  Profile profile_;
  double amp_;
};

class LinearField final : public AnalyticField {
 public:
  LinearField(const Mat& generator, double t_max)
      : AnalyticField(generator.n, t_max), a_(generator) {
    Mat s(a_.n);
    for (int i = 0; i < a_.n; ++i)
      for (int j = 0; j < a_.n; ++j) s(i, j) = 0.5 * (a_(i, j) + a_(j, i));
    for (int i = 0; i < a_.n; ++i) s(i, i) -= a_.trace() / a_.n;
    sa_norm_ = operator_norm(s);
  }
  Vec velocity(double, const Vec& x) const override { return a_ * x; }
  Mat derivative(double, const Vec&) const override { return a_; }
  double divergence(double, const Vec&) const override { return a_.trace(); }
  std::optional<double> anticonformal_sup(double) const override { return sa_norm_; }

 private:
  Mat a_;
  double sa_norm_;
};

// Velocity of a uniform unit-strength vorticity patch on the unit disc:
// rigid rotation at rate 1/2 inside, tangential decay 1/(2 r^2) outside.
class DiscVortexField final : public AnalyticField {
 public:
  explicit DiscVortexField(double t_max) : AnalyticField(2, t_max) {}

  Vec velocity(double, const Vec& x) const override {
    const double r2 = x.dot(x);
    const double f = r2 <= 1.0 ? 0.5 : 0.5 / r2;
    return Vec(-f * x[1], f * x[0]);
  }

  Mat derivative(double, const Vec& x) const override {
    Mat m(2);
    const double r2 = x.dot(x);
    if (r2 <= 1.0) {
      m(0, 1) = -0.5;
      m(1, 0) = 0.5;
      return m;
    }
    const double r4 = r2 * r2;
    m(0, 0) = x[0] * x[1] / r4;
    m(0, 1) = -0.5 / r2 + x[1] * x[1] / r4;
    m(1, 0) = 0.5 / r2 - x[0] * x[0] / r4;
    m(1, 1) = -x[0] * x[1] / r4;
    return m;
  }

  double divergence(double, const Vec&) const override { return 0.0; }
  // |S_A b| = 0 inside, 1/(2 r^2) outside; the sup 1/2 sits at the rim.
  std::optional<double> anticonformal_sup(double) const override { return 0.5; }

  bool has_exact_flow() const override { return true; }
  Vec exact_flow(double s, double t, const Vec& x) const override {
    const double r2 = x.dot(x);
    const double rate = r2 <= 1.0 ? 0.5 : 0.5 / r2;
    const double a = rate * (t - s);
    const double c = std::cos(a), sn = std::sin(a);
    return Vec(c * x[0] - sn * x[1], sn * x[0] + c * x[1]);
  }
};

// b(x) = (x1 log|x1|, 0): in the Zygmund class (bounded second differences)
// but not Lipschitz at x1 = 0. The gradient blows up there, so this field
// deliberately reports no anticonformal sup.
class XLogXField final : public AnalyticField {
 public:
  explicit XLogXField(double t_max) : AnalyticField(2, t_max) {}
  Vec velocity(double, const Vec& x) const override {
    const double u = x[0];
    return Vec(u == 0.0 ? 0.0 : u * std::log(std::abs(u)), 0.0);
  }
  Mat derivative(double, const Vec& x) const override {
    Mat m(2);
    m(0, 0) = x[0] == 0.0 ? -std::numeric_limits<double>::infinity()
                          : std::log(std::abs(x[0])) + 1.0;
    return m;
  }
};

TimeShearField::Profile parse_profile(const std::string& p) {
  if (p == "sin") return TimeShearField::Profile::sine;
  if (p == "cos") return TimeShearField::Profile::cosine;
  if (p == "const") return TimeShearField::Profile::constant;
  throw ConfigError("unknown timeshear profile '" + p + "' (expected sin|cos|const)");
}

}  // namespace

FieldPtr make_rotation_field(double t_max) {
  return std::make_shared<RotationField>(t_max);
}
FieldPtr make_dilation_field(int dim, double t_max) {
  return std::make_shared<DilationField>(dim, t_max);
}
FieldPtr make_spiral_field(double dilation_rate, double rotation_rate, double t_max) {
  return std::make_shared<SpiralField>(dilation_rate, rotation_rate, t_max);
}
FieldPtr make_shear_field(double t_max) {
  return std::make_shared<ShearField>(t_max);
}
FieldPtr make_time_shear_field(const std::string& profile, double amplitude,
                               double t_max) {
  return std::make_shared<TimeShearField>(parse_profile(profile), amplitude, t_max);
}
FieldPtr make_linear_field(const Mat& generator, double t_max) {
  return std::make_shared<LinearField>(generator, t_max);
}
FieldPtr make_disc_vortex_field(double t_max) {
  return std::make_shared<DiscVortexField>(t_max);
}
FieldPtr make_xlogx_field(double t_max) {
  return std::make_shared<XLogXField>(t_max);
}

FieldPtr make_builtin_field(const std::string& name, const nlohmann::json& params) {
  const double t_max = params.value("t_max", 10.0);
  if (name == "rotation") return make_rotation_field(t_max);
  if (name == "dilation") return make_dilation_field(params.value("dim", 2), t_max);
  if (name == "spiral")
    return make_spiral_field(params.value("dilation_rate", 1.0),
                             params.value("rotation_rate", 1.0), t_max);
  if (name == "shear") return make_shear_field(t_max);
  if (name == "timeshear")
    return make_time_shear_field(params.value("profile", std::string("sin")),
                                 params.value("amplitude", 1.0), t_max);
  if (name == "linear") {
    if (!params.contains("matrix")) throw ConfigError("linear field needs a 'matrix'");
    const auto& rows = params.at("matrix");
    const int n = static_cast<int>(rows.size());
    if (n < 2 || n > kMaxDim) throw ConfigError("linear field matrix must be 2x2..4x4");
    Mat a(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw ConfigError("linear field matrix must be square");
      for (int j = 0; j < n; ++j) a(i, j) = rows[i][j].get<double>();
    }
    return make_linear_field(a, t_max);
  }
  if (name == "disc") return make_disc_vortex_field(t_max);
  if (name == "xlogx") return make_xlogx_field(t_max);
  throw ConfigError("unknown builtin field '" + name + "'");
}

FieldPtr make_field(const nlohmann::json& descriptor) {
  if (descriptor.is_string())
    return make_builtin_field(descriptor.get<std::string>(), nlohmann::json::object());
  if (descriptor.contains("file")) {
    const std::string path = descriptor.at("file").get<std::string>();
    // .json files are descriptor aliases; anything else is a QCF1 grid
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
      std::ifstream is(path);
      if (!is) throw ConfigError("cannot open field descriptor '" + path + "'");
      nlohmann::json inner;
      try {
        inner = nlohmann::json::parse(is);
      } catch (const std::exception& e) {
        throw ConfigError("field descriptor parse error in '" + path + "': " + e.what());
      }
      return make_field(inner);
    }
    return load_grid_field(path);
  }
  if (descriptor.contains("name"))
    return make_builtin_field(descriptor.at("name").get<std::string>(), descriptor);
  throw ConfigError("field descriptor needs 'name' or 'file'");
}

}  // namespace qcflow
