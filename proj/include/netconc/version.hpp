#pragma once

namespace netconc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace netconc
