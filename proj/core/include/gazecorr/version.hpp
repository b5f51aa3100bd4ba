#pragma once

namespace gazecorr {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gazecorr
