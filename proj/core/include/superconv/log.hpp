#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace superconv {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from the SUPERCONV_LOG environment variable: error|info|debug.
inline LogLevel log_level() {
  static const LogLevel lvl = [] {
    const char* env = std::getenv("SUPERCONV_LOG");
    if (env == nullptr) return LogLevel::Error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Error;
  }();
  return lvl;
}

template <class... Args>
void log_info(const char* fmt, Args... args) {
  if (log_level() >= LogLevel::Info) {
    std::fprintf(stderr, "[superconv] ");
    if constexpr (sizeof...(Args) == 0)
      std::fputs(fmt, stderr);
    else
      std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

template <class... Args>
void log_debug(const char* fmt, Args... args) {
  if (log_level() >= LogLevel::Debug) {
    std::fprintf(stderr, "[superconv:debug] ");
    if constexpr (sizeof...(Args) == 0)
      std::fputs(fmt, stderr);
    else
      std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

} // namespace superconv
