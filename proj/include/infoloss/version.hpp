#ifndef INFOLOSS_VERSION_HPP
#define INFOLOSS_VERSION_HPP

namespace infoloss {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace infoloss

#endif  // INFOLOSS_VERSION_HPP
