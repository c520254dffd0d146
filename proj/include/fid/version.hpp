#pragma once

namespace fid {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fid
