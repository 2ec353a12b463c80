#pragma once

namespace tau2 {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;
inline constexpr int kCacheSchema = 1;

} // namespace tau2
