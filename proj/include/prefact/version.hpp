#pragma once

namespace prefact {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace prefact
