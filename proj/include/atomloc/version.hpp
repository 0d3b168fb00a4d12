#pragma once

namespace atomloc {

inline constexpr const char* version = "0.1.0";

}  // namespace atomloc
