#pragma once

namespace tangentlab {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever a CSV column layout changes; echoed into every output file.
inline constexpr int kCsvSchemaVersion = 1;

}  // namespace tangentlab
