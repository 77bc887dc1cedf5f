#pragma once

namespace kboot {

inline constexpr const char* kVersion = "kboot 0.1.0";

// Bumped whenever a serialized report layout changes.
inline constexpr int kSchemaVersion = 1;

// Generator identity embedded in reports; any change to the stream
// derivation or to the raw generator invalidates recorded seeds.
inline constexpr const char* kRngVersion = "philox4x32-10/v1";

}  // namespace kboot
