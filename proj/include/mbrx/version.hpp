#ifndef MBRX_VERSION_HPP
#define MBRX_VERSION_HPP

namespace mbrx {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace mbrx

#endif
