#pragma once

namespace gridssq {

inline constexpr const char* version = "0.1.0";

}  // namespace gridssq
