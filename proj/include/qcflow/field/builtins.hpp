#pragma once

// Analytic field catalog. Every builtin ships its exact gradient, and all
// except the Zygmund demonstration field ship a closed-form flow map, so
// downstream distortion and transport results can be checked against exact
// answers.
//
//   rotation   b(x) = (-x2, x1)                    conformal, isometric flow
//   dilation   b(x) = x                            conformal
//   spiral     b(x) = a x + c (-x2, x1)            conformal (rotation+dilation)
//   shear      b(x) = (x2, 0)                      |S_A b| = 1/2
//   timeshear  b(t,x) = g(t) (x2, 0)               g in {sin, cos, const}
//   linear     b(x) = A x                          arbitrary 2x2/3x3 generator
//   disc       Biot-Savart field of the unit disc  Lipschitz, kink at the rim
//   xlogx      b(x) = (x1 log|x1|, 0)              Zygmund, not Lipschitz

#include <string>

#include "json.hpp"
#include "qcflow/field/vector_field.hpp"

namespace qcflow {

FieldPtr make_rotation_field(double t_max = 10.0);
FieldPtr make_dilation_field(int dim = 2, double t_max = 10.0);
FieldPtr make_spiral_field(double dilation_rate, double rotation_rate, double t_max = 10.0);
FieldPtr make_shear_field(double t_max = 10.0);
// profile: "sin", "cos" or "const"; b(t,x) = amplitude * g(t) * (x2, 0)
FieldPtr make_time_shear_field(const std::string& profile, double amplitude = 1.0,
                               double t_max = 10.0);
FieldPtr make_linear_field(const Mat& generator, double t_max = 10.0);
FieldPtr make_disc_vortex_field(double t_max = 10.0);
FieldPtr make_xlogx_field(double t_max = 10.0);

// Builtin by name with JSON parameters ({} for defaults).
FieldPtr make_builtin_field(const std::string& name, const nlohmann::json& params);

// Field from a descriptor object: {"name": ..., ...params} for builtins or
// {"file": "grid.qcf"} for sampled grids.
FieldPtr make_field(const nlohmann::json& descriptor);

}  // namespace qcflow
