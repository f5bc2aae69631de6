#pragma once

namespace torusrev {

inline constexpr const char* kArtifactVersion = "0.1.0";

} // namespace torusrev
