#pragma once

namespace pmflow {

inline constexpr int version_major = 1;
inline constexpr int version_minor = 0;
inline constexpr int version_patch = 0;
inline constexpr const char* version_string = "1.0.0";

// Version tag written into every CSV/JSON artifact and the PMNS header.
inline constexpr int format_version = 1;

}  // namespace pmflow
