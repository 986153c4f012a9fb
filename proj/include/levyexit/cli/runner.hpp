#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "levyexit/cli/config.hpp"
#include "levyexit/cli/output.hpp"

namespace levyexit::cli {

ResultTable run_met(const RunConfig& cfg);
ResultTable run_escape(const RunConfig& cfg);
ResultTable run_pdf(const RunConfig& cfg);
ResultTable run_simulate(const RunConfig& cfg);
ResultTable run_potential(const RunConfig& cfg);

struct SweepFile {
    std::string name;  ///< file name inside the output directory
    double panel_value = 0.0;
    double d = 0.0;
    std::vector<double> curves;
    ResultTable table;
};

struct SweepResult {
    std::vector<SweepFile> files;
    std::string manifest;  ///< JSON text of manifest.json
};

/// One file per (panel value, d); the other of alpha/beta varies across the
/// curves in the file. A single-curve file is identical to the matching
/// met/escape run. Tuples run on cfg.jobs threads; results do not depend on
/// the thread count. The first failing tuple (in sweep order) is reported.
SweepResult run_sweep(const RunConfig& cfg);

/// Runs a validated config and writes its output(s): files under
/// cfg.output, or stdout when cfg.output is empty (not allowed for sweep).
void execute(const RunConfig& cfg, std::ostream& out);

/// Full command line front end. Returns the process exit code: 0 success,
/// 2 invalid input, 3 numerical failure, 1 I/O or other errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace levyexit::cli
