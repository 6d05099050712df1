#pragma once

namespace heraldkit {

inline constexpr const char* kToolVersion = "heraldkit 1.0.0";

}  // namespace heraldkit
