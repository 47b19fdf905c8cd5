#pragma once

namespace pslepian {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pslepian
