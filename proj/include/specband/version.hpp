#pragma once

namespace specband {

#ifdef SPECBAND_VERSION
inline constexpr const char* kVersion = SPECBAND_VERSION;
#else
inline constexpr const char* kVersion = "0.1.0";
#endif

}  // namespace specband
