#pragma once

namespace normdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace normdyn
