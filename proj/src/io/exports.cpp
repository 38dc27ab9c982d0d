#include "qcflow/io/exports.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcflow {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<FlowTrajectory>& trajectories) {
  std::ostringstream os;
  const int n = trajectories.empty() ? 2 : trajectories.front().seed.n;
  os << "seed_id,t";
  for (int i = 1; i <= n; ++i) os << ",x_" << i;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) os << ",M_" << i << j;
  os << ",detM\n";
  for (std::size_t id = 0; id < trajectories.size(); ++id) {
    const auto& tr = trajectories[id];
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      os << id << ',' << format_double(tr.times[k]);
      for (int i = 0; i < n; ++i) os << ',' << format_double(tr.positions[k][i]);
      if (!tr.jacobians.empty()) {
        const Mat& m = tr.jacobians[k];
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) os << ',' << format_double(m(i, j));
        os << ',' << format_double(m.det());
      } else {
        for (int i = 0; i < n * n + 1; ++i) os << ',';
      }
      os << '\n';
    }
  }
  write_text_file(path, os.str());
}

void write_seminorm_csv(const std::string& path,
                        const std::vector<SeminormResult>& rows) {
  std::ostringstream os;
  os << "kind,parameters,resolution,value\n";
  for (const auto& r : rows) {
    os << seminorm_kind_name(r.kind) << ',';
    if (r.kind == SeminormKind::vmo)
      os << "delta=" << r.delta;
    else if (r.kind == SeminormKind::gagliardo)
      os << "s=" << format_double(r.s) << " p=" << format_double(r.p);
    else
      os << '-';
    os << ',';
    for (std::size_t i = 0; i < r.resolution.size(); ++i)
      os << (i ? "x" : "") << r.resolution[i];
    os << ',' << format_double(r.value) << '\n';
  }
  write_text_file(path, os.str());
}

void write_vorticity_csv(const std::string& path,
                         const std::vector<VorticityDiagnostics>& rows) {
  std::ostringstream os;
  os << "t,circulation,max_omega,bmo\n";
  for (const auto& r : rows)
    os << format_double(r.t) << ',' << format_double(r.circulation) << ','
       << format_double(r.max_abs_omega) << ',' << format_double(r.bmo) << '\n';
  write_text_file(path, os.str());
}

nlohmann::json distortion_report_json(const DistortionReport& report) {
  nlohmann::json j;
  j["x"] = std::vector<double>(report.x.a.begin(), report.x.a.begin() + report.x.n);
  j["radii"] = report.radii;
  j["ratios"] = report.ratios;
  j["H"] = report.h_estimate;
  j["K"] = report.k_estimate;
  j["converged"] = report.converged;
  j["oscillatory"] = report.oscillatory;
  j["pointwise_bound"] = report.pointwise_bound;
  j["uniform_bound"] = report.uniform_bound;
  j["pointwise_pass"] = report.pointwise_pass;
  j["uniform_pass"] = report.uniform_pass;
  j["bound_tol"] = report.bound_tol;
  return j;
}

void write_distortion_csv(const std::string& path,
                          const std::vector<DistortionReport>& reports) {
  std::ostringstream os;
  const int n = reports.empty() ? 2 : reports.front().x.n;
  for (int i = 1; i <= n; ++i) os << "x_" << i << ',';
  os << "H,K,pointwise_bound,uniform_bound,pointwise_pass,uniform_pass\n";
  for (const auto& r : reports) {
    for (int i = 0; i < n; ++i) os << format_double(r.x[i]) << ',';
    os << format_double(r.h_estimate) << ',' << format_double(r.k_estimate) << ','
       << format_double(r.pointwise_bound) << ',' << format_double(r.uniform_bound)
       << ',' << (r.pointwise_pass ? 1 : 0) << ',' << (r.uniform_pass ? 1 : 0) << '\n';
  }
  write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot create '" + path + "'");
  os << contents;
  if (!os) throw IoError("write failure on '" + path + "'");
}

std::string fnv1a_file_hash(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for hashing");
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (is.get(c)) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qcflow
