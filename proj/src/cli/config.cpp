#include "levyexit/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "levyexit/errors.hpp"
#include "levyexit/monte_carlo.hpp"

#ifndef LEVYEXIT_PRESET_DIR
#define LEVYEXIT_PRESET_DIR "presets"
#endif

namespace levyexit::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const std::string& expected) {
    throw ValidationError("config: key '" + key + "' has value '" + text + "'; expected " + expected);
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec == std::errc() && ptr == t.data() + t.size() && !t.empty()) return v;
    // Accept integral scientific notation such as 1e5.
    const double d = parse_double(key, t);
    if (d >= 0.0 && d <= 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
    bad_value(key, text, "a non-negative integer");
}

template <class Enum>
Enum parse_choice(const std::string& key, const std::string& text,
                  std::initializer_list<std::pair<const char*, Enum>> choices) {
    const std::string t = trim(text);
    std::string names;
    for (const auto& [name, value] : choices) {
        if (t == name) return value;
        names += names.empty() ? name : std::string("|") + name;
    }
    bad_value(key, text, "one of " + names);
}

const char* format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

const char* pdf_method_name(PdfMethod m) {
    switch (m) {
        case PdfMethod::Fourier: return "fourier";
        case PdfMethod::Integral: return "integral";
        case PdfMethod::Auto: return "auto";
    }
    return "auto";
}

void check_noise(double alpha, double beta, double d) { (void)StableNoiseParams::make(alpha, beta, d); }

void check_drift(const RunConfig& c) {
    if (c.drift == "tumor") {
        (void)TumorParams::make(c.theta, c.gamma);
        if (!(c.a >= -1.0)) {
            throw ValidationError("config: tumor drift requires a >= -1 (pole of the immune term at x = -1)");
        }
    } else if (c.drift != "zero") {
        bad_value("drift", c.drift, "tumor|zero");
    }
}

void check_unique_sorted(const std::string& key, const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            throw ValidationError("config: '" + key + "' must be strictly increasing");
        }
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    if (!t.empty() && t.front() == '+') t.erase(0, 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        bad_value(key, text, "a finite number");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::vector<double> out;
    if (t.empty()) return out;
    if (t.find(':') != std::string::npos) {
        // start:step:stop, inclusive of stop.
        std::vector<std::string> parts;
        std::stringstream ss(t);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) bad_value(key, text, "start:step:stop");
        const double start = parse_double(key, parts[0]);
        const double step = parse_double(key, parts[1]);
        const double stop = parse_double(key, parts[2]);
        if (!(step > 0.0) || stop < start) bad_value(key, text, "start:step:stop with step > 0, stop >= start");
        const long n = std::lround((stop - start) / step);
        if (std::abs(start + static_cast<double>(n) * step - stop) > 1e-9 * std::max(1.0, std::abs(stop))) {
            bad_value(key, text, "start:step:stop with (stop - start)/step integral");
        }
        for (long i = 0; i <= n; ++i) {
            // Round to 12 decimals so 0.1:0.1:1.9 yields 0.3 rather than 0.30000000000000004.
            const double v = start + static_cast<double>(i) * step;
            out.push_back(std::round(v * 1e12) / 1e12);
        }
        return out;
    }
    std::stringstream ss(t);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_double(key, item));
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

std::string to_string(Subcommand s) {
    switch (s) {
        case Subcommand::Met: return "met";
        case Subcommand::Escape: return "escape";
        case Subcommand::Sweep: return "sweep";
        case Subcommand::Pdf: return "pdf";
        case Subcommand::Simulate: return "simulate";
        case Subcommand::Potential: return "potential";
    }
    return "met";
}

Subcommand parse_subcommand(const std::string& s) {
    return parse_choice<Subcommand>("subcommand", s,
                                    {{"met", Subcommand::Met},
                                     {"escape", Subcommand::Escape},
                                     {"sweep", Subcommand::Sweep},
                                     {"pdf", Subcommand::Pdf},
                                     {"simulate", Subcommand::Simulate},
                                     {"potential", Subcommand::Potential}});
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "subcommand", "alpha", "beta", "d", "drift", "theta", "gamma", "a", "b", "h", "stencil",
        "x0", "paths", "dt", "seed", "max_steps", "kind", "alphas", "betas", "ds", "panel",
        "xmin", "xmax", "nx", "pdf_method", "format", "output", "jobs"};
    return keys;
}

RunConfig apply_overrides(RunConfig c, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "subcommand") c.subcommand = parse_subcommand(value);
        else if (key == "alpha") c.alpha = parse_double(key, value);
        else if (key == "beta") c.beta = parse_double(key, value);
        else if (key == "d") c.d = parse_double(key, value);
        else if (key == "drift") c.drift = trim(value);
        else if (key == "theta") c.theta = parse_double(key, value);
        else if (key == "gamma") c.gamma = parse_double(key, value);
        else if (key == "a") c.a = parse_double(key, value);
        else if (key == "b") c.b = parse_double(key, value);
        else if (key == "h") c.h = parse_double(key, value);
        else if (key == "stencil")
            c.stencil = parse_choice<CompensatorStencil>(
                key, value, {{"upwind", CompensatorStencil::Upwind}, {"central", CompensatorStencil::Central}});
        else if (key == "x0") c.x0 = parse_double(key, value);
        else if (key == "paths") c.paths = parse_count(key, value);
        else if (key == "dt") c.dt = parse_double(key, value);
        else if (key == "seed") c.seed = parse_count(key, value);
        else if (key == "max_steps") c.max_steps = parse_count(key, value);
        else if (key == "kind")
            c.kind = parse_choice<ProblemKind>(
                key, value, {{"met", ProblemKind::MeanExitTime}, {"escape", ProblemKind::EscapeLeft}});
        else if (key == "alphas") c.alphas = parse_list(key, value);
        else if (key == "betas") c.betas = parse_list(key, value);
        else if (key == "ds") c.ds = parse_list(key, value);
        else if (key == "panel")
            c.panel = parse_choice<SweepPanel>(key, value, {{"alpha", SweepPanel::Alpha}, {"beta", SweepPanel::Beta}});
        else if (key == "xmin") c.xmin = parse_double(key, value);
        else if (key == "xmax") c.xmax = parse_double(key, value);
        else if (key == "nx") c.nx = parse_count(key, value);
        else if (key == "pdf_method")
            c.pdf_method = parse_choice<PdfMethod>(
                key, value,
                {{"fourier", PdfMethod::Fourier}, {"integral", PdfMethod::Integral}, {"auto", PdfMethod::Auto}});
        else if (key == "format")
            c.format = parse_choice<OutputFormat>(key, value, {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}});
        else if (key == "output") c.output = trim(value);
        else if (key == "jobs") c.jobs = static_cast<unsigned>(parse_count(key, value));
        else throw ValidationError("config: unknown key '" + key + "'");
    }
    return c;
}

void validate(const RunConfig& c) {
    switch (c.subcommand) {
        case Subcommand::Met:
        case Subcommand::Escape:
            check_noise(c.alpha, c.beta, c.d);
            check_drift(c);
            (void)Grid::make(c.a, c.b, c.h);
            break;
        case Subcommand::Sweep: {
            if (c.alphas.empty() && c.betas.empty() && c.ds.empty()) {
                throw ValidationError("config: sweep needs at least one axis (alphas, betas or ds)");
            }
            const auto& al = c.alphas.empty() ? std::vector<double>{c.alpha} : c.alphas;
            const auto& be = c.betas.empty() ? std::vector<double>{c.beta} : c.betas;
            const auto& dd = c.ds.empty() ? std::vector<double>{c.d} : c.ds;
            check_unique_sorted("alphas", al);
            check_unique_sorted("betas", be);
            check_unique_sorted("ds", dd);
            for (double x : al)
                for (double y : be)
                    for (double z : dd) check_noise(x, y, z);
            check_drift(c);
            (void)Grid::make(c.a, c.b, c.h);
            break;
        }
        case Subcommand::Pdf: {
            if (c.d != 0.0) throw ValidationError("config: pdf requires d = 0 (pure stable law)");
            const auto& al = c.alphas.empty() ? std::vector<double>{c.alpha} : c.alphas;
            const auto& be = c.betas.empty() ? std::vector<double>{c.beta} : c.betas;
            check_unique_sorted("alphas", al);
            check_unique_sorted("betas", be);
            for (double x : al) {
                if (!(x > 0.0 && x <= 2.0)) {
                    throw ValidationError("config: pdf alphas must lie in (0, 2] (alpha = 2 is the Gaussian N(0, 2))");
                }
                for (double y : be) {
                    if (x < 2.0) check_noise(x, y, 0.0);
                    else if (!(y >= -1.0 && y <= 1.0)) throw ValidationError("stable noise: -1 <= beta <= 1 violated");
                }
            }
            if (!(c.xmin < c.xmax)) throw ValidationError("config: xmin < xmax violated");
            if (c.nx < 2) throw ValidationError("config: nx >= 2 violated");
            break;
        }
        case Subcommand::Simulate: {
            check_noise(c.alpha, c.beta, c.d);
            if (c.alpha == 1.0) {
                throw ValidationError("config: simulate does not support alpha = 1; use met/escape (solver) instead");
            }
            check_drift(c);
            if (!(c.a < c.b)) throw ValidationError("config: a < b violated");
            if (!(c.x0 > c.a && c.x0 < c.b)) {
                throw ValidationError("config: x0 = " + format_double(c.x0) + " must lie in the open domain (" +
                                      format_double(c.a) + ", " + format_double(c.b) + ")");
            }
            SimConfig sc;
            sc.dt = c.dt;
            sc.n_paths = c.paths;
            sc.max_steps = c.max_steps;
            sc.validate();
            break;
        }
        case Subcommand::Potential:
            check_drift(c);
            if (c.drift != "tumor") throw ValidationError("config: potential requires drift = tumor");
            if (!(c.xmin > -1.0)) throw ValidationError("config: potential requires xmin > -1");
            if (!(c.xmin < c.xmax)) throw ValidationError("config: xmin < xmax violated");
            if (c.nx < 2) throw ValidationError("config: nx >= 2 violated");
            break;
    }
}

Entries canonical_entries(const RunConfig& c) {
    Entries e;
    auto num = [&](const char* k, double v) { e.emplace_back(k, format_double(v)); };
    auto drift = [&] {
        e.emplace_back("drift", c.drift);
        if (c.drift == "tumor") {
            num("theta", c.theta);
            num("gamma", c.gamma);
        }
    };
    e.emplace_back("subcommand", to_string(c.subcommand));
    switch (c.subcommand) {
        case Subcommand::Met:
        case Subcommand::Escape:
            num("alpha", c.alpha);
            num("beta", c.beta);
            num("d", c.d);
            drift();
            num("a", c.a);
            num("b", c.b);
            num("h", c.h);
            e.emplace_back("stencil", levyexit::to_string(c.stencil));
            break;
        case Subcommand::Sweep:
            e.emplace_back("kind", levyexit::to_string(c.kind));
            e.emplace_back("panel", c.panel == SweepPanel::Alpha ? "alpha" : "beta");
            num("alpha", c.alpha);
            num("beta", c.beta);
            num("d", c.d);
            e.emplace_back("alphas", format_list(c.alphas));
            e.emplace_back("betas", format_list(c.betas));
            e.emplace_back("ds", format_list(c.ds));
            drift();
            num("a", c.a);
            num("b", c.b);
            num("h", c.h);
            e.emplace_back("stencil", levyexit::to_string(c.stencil));
            break;
        case Subcommand::Pdf:
            num("alpha", c.alpha);
            num("beta", c.beta);
            e.emplace_back("alphas", format_list(c.alphas));
            e.emplace_back("betas", format_list(c.betas));
            num("xmin", c.xmin);
            num("xmax", c.xmax);
            e.emplace_back("nx", std::to_string(c.nx));
            e.emplace_back("pdf_method", pdf_method_name(c.pdf_method));
            break;
        case Subcommand::Simulate:
            num("alpha", c.alpha);
            num("beta", c.beta);
            num("d", c.d);
            drift();
            num("a", c.a);
            num("b", c.b);
            num("x0", c.x0);
            e.emplace_back("paths", std::to_string(c.paths));
            num("dt", c.dt);
            e.emplace_back("seed", std::to_string(c.seed));
            e.emplace_back("max_steps", std::to_string(c.max_steps));
            break;
        case Subcommand::Potential:
            drift();
            num("xmin", c.xmin);
            num("xmax", c.xmax);
            e.emplace_back("nx", std::to_string(c.nx));
            break;
    }
    e.emplace_back("format", format_name(c.format));
    return e;
}

KeyValues load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot read '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    KeyValues kv;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& ex) {
            throw ValidationError("config: '" + path.string() + "' is not valid JSON: " + ex.what());
        }
        const auto it = j.find("metadata");
        if (it == j.end() || !it->contains("config")) {
            throw ValidationError("config: JSON file '" + path.string() + "' has no metadata.config object");
        }
        for (const auto& [k, v] : (*it)["config"].items()) kv[k] = v.get<std::string>();
        return kv;
    }

    std::stringstream lines(text);
    const bool result_file = text.compare(first == std::string::npos ? 0 : first, 10, "# levyexit") == 0;
    int lineno = 0;
    for (std::string raw; std::getline(lines, raw);) {
        ++lineno;
        std::string line = trim(raw);
        if (result_file) {
            if (line.rfind("# config:", 0) != 0) continue;
            line = trim(line.substr(9));
        } else if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config: " + path.string() + ":" + std::to_string(lineno) +
                                  ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '-', '_');
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::filesystem::path preset_path(const std::string& name, const std::string& dir) {
    std::vector<std::filesystem::path> dirs;
    if (!dir.empty()) dirs.emplace_back(dir);
    if (const char* env = std::getenv("LEVYEXIT_PRESET_DIR")) dirs.emplace_back(env);
    dirs.emplace_back(LEVYEXIT_PRESET_DIR);
    for (const auto& d : dirs) {
        const auto p = d / (name + ".cfg");
        if (std::filesystem::exists(p)) return p;
    }
    throw ValidationError("config: unknown preset '" + name + "' (looked for " + name + ".cfg in " +
                          dirs.front().string() + ")");
}

}  // namespace levyexit::cli
