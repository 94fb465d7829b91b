#pragma once

#include <string_view>

#ifndef WIGDEC_VERSION
#define WIGDEC_VERSION "0.1.0"
#endif

namespace wigdec {

inline constexpr std::string_view kVersion = WIGDEC_VERSION;

}  // namespace wigdec
