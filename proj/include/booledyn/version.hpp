#ifndef BOOLEDYN_VERSION_HPP
#define BOOLEDYN_VERSION_HPP

namespace booledyn {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
