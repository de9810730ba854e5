#pragma once

namespace daflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace daflow
