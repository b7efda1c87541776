#pragma once

namespace dqnav {

inline constexpr const char* kVersion = "dqnav-0.1.0";

}  // namespace dqnav
