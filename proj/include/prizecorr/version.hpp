#pragma once

namespace prizecorr {

inline constexpr const char* version = "0.1.0";

}  // namespace prizecorr
