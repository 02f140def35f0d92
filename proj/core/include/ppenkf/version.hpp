#pragma once

namespace ppenkf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ppenkf
