#pragma once

namespace qfcs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qfcs
