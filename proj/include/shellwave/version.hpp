#pragma once

namespace shellwave {
inline constexpr const char *kVersion = "0.1.0";
} // namespace shellwave
