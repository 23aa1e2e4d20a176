#pragma once

namespace ffsim {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ffsim
