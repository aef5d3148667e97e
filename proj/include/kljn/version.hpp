#pragma once

namespace kljn {
inline constexpr const char* kVersion = "1.0.0";
}
