#pragma once

namespace regscope {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace regscope
