#pragma once

#include <string>

#include "superconv/study.hpp"

namespace superconv {

// JSON run manifest: tool version, config echo, timestamp, per-case rows,
// rate report and verdicts.
std::string render_manifest(const StudyResult& result, const std::string& config_text);

void write_manifest(const StudyResult& result, const std::string& config_text,
                    const std::string& path);

} // namespace superconv
