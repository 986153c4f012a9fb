#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "levyexit/cli/config.hpp"

namespace levyexit::cli {

/// A result file: replayable config, diagnostics, and a numeric table.
struct ResultTable {
    Entries config;
    Entries diagnostics;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// CSV: "# levyexit <version>", then "# config: k=v" and "# diag: k=v"
/// lines, a column header and shortest round-trip numbers.
std::string to_csv(const ResultTable& t);
/// JSON: {"tool", "metadata": {"config", "diagnostics"}, "columns", "data"}.
std::string to_json(const ResultTable& t);
std::string render(const ResultTable& t, OutputFormat f);

/// Parses either format back; numbers are recovered bit-exactly.
ResultTable parse_result(const std::string& text);
ResultTable read_result(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory and renames it over
/// `path`, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace levyexit::cli
