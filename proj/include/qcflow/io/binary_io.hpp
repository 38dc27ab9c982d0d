#pragma once

// Little-endian binary primitives shared by the QCF1/QCG1 readers/writers.

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>

#include "qcflow/core/errors.hpp"

namespace qcflow::io {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

inline void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline std::uint32_t read_u32(std::istream& is, const std::string& what) {
  std::uint32_t v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw IoError("truncated file while reading " + what);
  return v;
}
inline double read_f64(std::istream& is, const std::string& what) {
  double v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw IoError("truncated file while reading " + what);
  return v;
}
inline void expect_magic(std::istream& is, const char (&magic)[5], const std::string& path) {
  char buf[4];
  if (!is.read(buf, 4) || buf[0] != magic[0] || buf[1] != magic[1] ||
      buf[2] != magic[2] || buf[3] != magic[3])
    throw IoError("bad magic in '" + path + "' (expected " + magic + ")");
}

}  // namespace qcflow::io
