#pragma once

namespace drivewave {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace drivewave
