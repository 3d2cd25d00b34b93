#pragma once

namespace jcarray {

inline constexpr const char* kArtifactName = "jcarray";
inline constexpr const char* kArtifactVersion = "0.1.0";

} // namespace jcarray
