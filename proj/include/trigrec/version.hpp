#pragma once

namespace trigrec {
inline constexpr const char* version = "0.1.0";
}
