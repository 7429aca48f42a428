#pragma once

#include <string>

#include "superconv/study.hpp"

namespace superconv {

// CSV rows for the per-case error table, sorted by delta descending. Floats
// are rendered in scientific notation with 17 significant digits; columns
// absent for the problem kind stay empty.
std::string render_csv(const std::vector<CaseResult>& cases, ProblemKind kind);

void emit_csv(const StudyResult& result, const std::string& path);

} // namespace superconv
