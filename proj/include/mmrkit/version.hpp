#pragma once

namespace mmrkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mmrkit
