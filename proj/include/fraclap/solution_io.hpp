#pragma once

#include <string>

#include "fraclap/nonlinearity.hpp"
#include "fraclap/solvers.hpp"

namespace fraclap {

/// A solution together with the problem it solves.
struct SolutionFile {
  ProblemSpec spec;
  NlKind kind = NlKind::power;
  NlParams params{};
  SolutionRecord record;
};

/// Structured text: format_version=1, problem and nl fields, record fields,
/// coefficients one per line, then checksum=<FNV-1a 64 hex> over all prior
/// lines. Doubles are written in shortest round-trip form.
std::string render_solution(const SolutionFile& file);
/// Throws VersionMismatch, ChecksumMismatch, BadValue.
SolutionFile parse_solution(const std::string& text);

void save_solution(const SolutionFile& file, const std::string& path);
SolutionFile load_solution(const std::string& path);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace fraclap
