#pragma once

namespace tgf {

inline constexpr const char* kVersion = "0.2.0";
inline constexpr const char* kBuildTag = "tgfsim-0.2.0";
// bumped whenever a CSV column set or JSON report layout changes
inline constexpr int kOutputSchemaVersion = 1;

}  // namespace tgf
