#pragma once

#include <stdexcept>
#include <string>

#include "superconv/study.hpp"

namespace superconv {

enum class ConfigErrorKind { UnknownKey, TypeMismatch, MissingRequired, BadSection };

struct ConfigError : std::runtime_error {
  ConfigErrorKind kind;
  int line; // 1-based line number; 0 when the problem is not line-local
  ConfigError(ConfigErrorKind k, int line_, const std::string& msg)
      : std::runtime_error(msg), kind(k), line(line_) {}
};

// Line-oriented `key = value` schema with bracketed sections
// [problem], [space], [sweep], [solver], [output]. Unknown keys are errors.
StudyConfig parse_config(const std::string& text);

// Canonical text form; parse_config(render_config(c)) reproduces c.
std::string render_config(const StudyConfig& config);

PotentialSpec parse_potential(const std::string& text);

} // namespace superconv
