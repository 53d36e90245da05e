#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace spectral_transfer::cli {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SPECTRAL_TRANSFER_LOG");
    if (!env) return LogLevel::kError;
    const std::string v(env);
    if (v == "debug") return LogLevel::kDebug;
    if (v == "info") return LogLevel::kInfo;
    return LogLevel::kError;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) {
    std::cerr << "[info] " << msg << "\n";
  }
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug) {
    std::cerr << "[debug] " << msg << "\n";
  }
}

}  // namespace spectral_transfer::cli
