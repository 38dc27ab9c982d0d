#pragma once

// Internal adaptive RK4 driver shared by the flow, pair-ratio, and transport
// code. Advances a flat state vector between requested output times; a step
// is accepted from the halved-step solution when the full/half Richardson
// gap passes the absolute tolerance.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "qcflow/core/errors.hpp"
#include "qcflow/flow/flow_map.hpp"

namespace qcflow::detail {

using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;

class Rk4Driver {
 public:
  static constexpr std::size_t kMaxSteps = 5'000'000;

  Rk4Driver(std::size_t dim, Rhs rhs, const StepControl& control)
      : dim_(dim), rhs_(std::move(rhs)), control_(control), dt_mag_(control.initial_dt),
        k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim), full_(dim), half_(dim) {}

  void reset_step() { dt_mag_ = control_.initial_dt; }

  // One classical RK4 step from (t, y) with step h into out.
  void rk4_step(double t, std::span<const double> y, double h, std::span<double> out) {
    rhs_(t, y, k1_);
    axpy(y, k1_, 0.5 * h);
    rhs_(t + 0.5 * h, tmp_, k2_);
    axpy(y, k2_, 0.5 * h);
    rhs_(t + 0.5 * h, tmp_, k3_);
    axpy(y, k3_, h);
    rhs_(t + h, tmp_, k4_);
    for (std::size_t i = 0; i < dim_; ++i)
      out[i] = y[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

  // Advances y from t_from to t_to (either direction). The persistent step
  // magnitude adapts across calls.
  void advance(double t_from, double t_to, std::vector<double>& y) {
    if (t_to == t_from) return;
    const double dir = t_to > t_from ? 1.0 : -1.0;
    double t = t_from;
    std::size_t steps = 0;
    while (dir * (t_to - t) > 0.0) {
      if (++steps > kMaxSteps)
        throw StiffnessError("integration exceeded the step budget");
      double h = std::min(dt_mag_, std::abs(t_to - t));
      bool lands = h >= std::abs(t_to - t);
      for (;;) {
        const double hs = dir * h;
        rk4_step(t, y, hs, full_);
        rk4_step(t, y, 0.5 * hs, half_);
        rk4_step(t + 0.5 * hs, half_, 0.5 * hs, half_);
        double err = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
          err = std::max(err, std::abs(full_[i] - half_[i]));
        if (err <= control_.abs_tol || h <= control_.min_dt) {
          if (err > 100.0 * control_.abs_tol)
            throw StiffnessError("step size underflow in RK4 integration");
          y.assign(half_.begin(), half_.end());
          t = lands ? t_to : t + hs;
          if (err < control_.abs_tol / 64.0)
            dt_mag_ = std::min(2.0 * h, control_.max_dt);
          else
            dt_mag_ = std::max(h, control_.min_dt);
          break;
        }
        h *= 0.5;
        lands = false;
      }
    }
  }

 private:
  void axpy(std::span<const double> y, const std::vector<double>& k, double c) {
    for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + c * k[i];
  }

  std::size_t dim_;
  Rhs rhs_;
  StepControl control_;
  double dt_mag_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_, full_, half_;
};

}  // namespace qcflow::detail
