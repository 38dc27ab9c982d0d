#pragma once

// CSV / JSON artifact writers. Numbers are printed with %.17g so identical
// runs produce byte-identical files.

#include <string>
#include <vector>

#include "json.hpp"
#include "qcflow/distortion/distortion.hpp"
#include "qcflow/flow/flow_map.hpp"
#include "qcflow/spaces/seminorms.hpp"
#include "qcflow/vorticity/biot_savart.hpp"

namespace qcflow {

std::string format_double(double v);

// seed_id, t, x_1..x_n, M_11..M_nn, detM
void write_trajectory_csv(const std::string& path,
                          const std::vector<FlowTrajectory>& trajectories);

// kind, parameters, resolution, value
void write_seminorm_csv(const std::string& path,
                        const std::vector<SeminormResult>& rows);

// t, circulation, max_omega, bmo
void write_vorticity_csv(const std::string& path,
                         const std::vector<VorticityDiagnostics>& rows);

nlohmann::json distortion_report_json(const DistortionReport& report);

// x_1..x_n, H, K, pointwise_bound, uniform_bound, pointwise_pass, uniform_pass
void write_distortion_csv(const std::string& path,
                          const std::vector<DistortionReport>& reports);

void write_text_file(const std::string& path, const std::string& contents);

// FNV-1a hash of a file's bytes, hex-encoded (recorded in manifests).
std::string fnv1a_file_hash(const std::string& path);

}  // namespace qcflow
