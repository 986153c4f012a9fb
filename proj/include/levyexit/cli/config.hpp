#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "levyexit/solver.hpp"

namespace levyexit::cli {

inline constexpr const char* kToolVersion = "levyexit 1.0.0";

enum class Subcommand { Met, Escape, Sweep, Pdf, Simulate, Potential };
enum class OutputFormat { Csv, Json };
enum class PdfMethod { Fourier, Integral, Auto };
/// Parameter that varies across sweep files; the other of alpha/beta varies
/// across the curves inside a file.
enum class SweepPanel { Alpha, Beta };

/// Flat key/value settings in canonical key spelling (underscores).
using KeyValues = std::map<std::string, std::string>;
/// Ordered key/value list as written to result headers.
using Entries = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
    Subcommand subcommand = Subcommand::Met;

    double alpha = 1.5;
    double beta = 0.0;
    double d = 0.0;

    std::string drift = "tumor";  ///< "tumor" or "zero"
    double theta = 0.1;
    double gamma = 3.0;

    double a = 0.0;
    double b = 5.0;
    double h = 0.05;
    CompensatorStencil stencil = CompensatorStencil::Upwind;

    double x0 = 2.5;
    std::size_t paths = 100000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    std::uint64_t max_steps = 10000000;

    ProblemKind kind = ProblemKind::MeanExitTime;  ///< sweep only
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> ds;
    SweepPanel panel = SweepPanel::Alpha;

    double xmin = -5.0;
    double xmax = 5.0;
    std::size_t nx = 201;
    PdfMethod pdf_method = PdfMethod::Auto;

    OutputFormat format = OutputFormat::Csv;

    // Not part of the replayable configuration.
    std::string output;
    unsigned jobs = 0;  ///< 0: hardware concurrency
};

/// Every key accepted in config files and presets.
const std::vector<std::string>& known_keys();

/// Applies `kv` on top of `base`. Unknown keys and malformed values raise
/// ValidationError naming the key.
RunConfig apply_overrides(RunConfig base, const KeyValues& kv);

/// Checks every module invariant the selected subcommand depends on.
void validate(const RunConfig& cfg);

/// Canonical, replayable settings for the subcommand (shortest round-trip
/// numbers). Feeding them back through apply_overrides() yields an equal config.
Entries canonical_entries(const RunConfig& cfg);

/// Reads `key = value` lines (# comments). Result files are accepted too:
/// CSV headers contribute their "# config:" lines and JSON files their
/// metadata.config object, so any output can be replayed.
KeyValues load_config_file(const std::filesystem::path& path);

/// Locates presets/<name>.cfg: `dir` if non-empty, then $LEVYEXIT_PRESET_DIR,
/// then the directory compiled into the binary.
std::filesystem::path preset_path(const std::string& name, const std::string& dir = {});

std::string to_string(Subcommand s);
Subcommand parse_subcommand(const std::string& s);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& key, const std::string& text);
std::vector<double> parse_list(const std::string& key, const std::string& text);
std::string format_list(const std::vector<double>& v);

}  // namespace levyexit::cli
