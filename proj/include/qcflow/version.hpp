#pragma once

namespace qcflow {
inline constexpr const char* kVersion = "0.1.0";
}
