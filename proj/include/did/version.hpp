#pragma once

namespace did {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace did
