#pragma once

namespace gr1w {

inline constexpr const char* version = "0.1.0";

}  // namespace gr1w
