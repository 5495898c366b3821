#pragma once

namespace cwave {
inline constexpr const char* kVersion = "0.1.0";
}
