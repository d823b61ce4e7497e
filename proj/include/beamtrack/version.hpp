#pragma once

#include <string_view>

namespace beamtrack {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace beamtrack
