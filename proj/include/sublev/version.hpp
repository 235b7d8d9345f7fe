#pragma once

namespace sublev {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sublev
