#include "qcflow/core/sampling.hpp"

#include <cmath>

#include "qcflow/core/errors.hpp"

namespace qcflow {

std::vector<Vec> direction_set(int dim, int count) {
  if (count < 1) throw ArgumentError("direction count must be positive");
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * M_PI * k / count;
      dirs.push_back(Vec(std::cos(a), std::sin(a)));
    }
    return dirs;
  }
  if (dim == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * k;
      dirs.push_back(Vec(r * std::cos(a), r * std::sin(a), z));
    }
    return dirs;
  }
  throw ArgumentError("direction sets are implemented for dimensions 2 and 3");
}

}  // namespace qcflow
