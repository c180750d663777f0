#pragma once

namespace hybridtherm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hybridtherm
