#ifndef CHLAB_VERSION_HPP
#define CHLAB_VERSION_HPP

namespace chlab {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
