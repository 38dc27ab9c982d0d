#include "qcflow/io/grid_io.hpp"

#include "qcflow/io/binary_io.hpp"

namespace qcflow {

void save_grid_function(const std::string& path, const GridFunction& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot create '" + path + "'");
  os.write("QCG1", 4);
  const int n = g.dim();
  io::write_u32(os, static_cast<std::uint32_t>(n));
  for (int i = 0; i < n; ++i)
    io::write_u32(os, static_cast<std::uint32_t>(g.resolution()[i]));
  for (int i = 0; i < n; ++i) {
    io::write_f64(os, g.box().lo[i]);
    io::write_f64(os, g.box().hi[i]);
  }
  os.write(reinterpret_cast<const char*>(g.values().data()),
           static_cast<std::streamsize>(g.values().size() * sizeof(double)));
  if (!os) throw IoError("write failure on '" + path + "'");
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open grid file '" + path + "'");
  io::expect_magic(is, "QCG1", path);
  const int n = static_cast<int>(io::read_u32(is, "dimension"));
  if (n < 2 || n > kMaxDim) throw IoError("unsupported grid dimension");
  std::vector<int> res(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) res[i] = static_cast<int>(io::read_u32(is, "resolution"));
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = io::read_f64(is, "axis min");
    hi[i] = io::read_f64(is, "axis max");
  }
  GridFunction g(Box(lo, hi), res);
  if (!is.read(reinterpret_cast<char*>(g.values().data()),
               static_cast<std::streamsize>(g.values().size() * sizeof(double))))
    throw IoError("truncated value block in '" + path + "'");
  g.check_finite();
  return g;
}

}  // namespace qcflow
