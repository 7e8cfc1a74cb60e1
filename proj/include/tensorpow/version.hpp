#pragma once

namespace tensorpow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tensorpow
