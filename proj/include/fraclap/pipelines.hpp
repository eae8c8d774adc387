#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclap/audit.hpp"
#include "fraclap/config.hpp"

namespace fraclap {

enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitNotAccepted = 3 };

const std::vector<std::string>& pipeline_commands();

/// Runs one subcommand, writing its files under cfg.out_dir and a summary to
/// `out`. Errors are reported on `err` and mapped to the exit code:
/// 2 for validation errors, 3 when a solver does not accept.
int run_pipeline(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Plain-text table of an audit report.
std::string render_audit_table(const AuditReport& rep);
/// Structured JSON record of an audit report.
std::string render_audit_json(const AuditReport& rep, const std::string& nl_name);

}  // namespace fraclap
