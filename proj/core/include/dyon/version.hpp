#ifndef DYON_VERSION_HPP
#define DYON_VERSION_HPP

namespace dyon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dyon

#endif
