#include "levyexit/cli/runner.hpp"

#include <cmath>
#include <exception>
#include <iostream>
#include <numbers>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "levyexit/errors.hpp"
#include "levyexit/kernels.hpp"
#include "levyexit/monte_carlo.hpp"

namespace levyexit::cli {

namespace {

DriftField make_drift(const RunConfig& c) {
    return c.drift == "zero" ? DriftField::zero() : DriftField::tumor(TumorParams::make(c.theta, c.gamma));
}

ExitProblem make_problem(const RunConfig& c, ProblemKind kind, double alpha, double beta, double d) {
    ExitProblem p;
    p.grid = Grid::make(c.a, c.b, c.h);
    p.noise = StableNoiseParams::make(alpha, beta, d);
    p.drift = make_drift(c);
    p.kind = kind;
    p.scheme.stencil = c.stencil;
    return p;
}

std::string value_column(ProblemKind kind) { return kind == ProblemKind::MeanExitTime ? "u" : "p"; }

void add_solve_diagnostics(Entries& diag, const SolveResult& r, const std::string& suffix) {
    const auto& g = r.diagnostics;
    diag.emplace_back("residual" + suffix, format_double(g.residual));
    diag.emplace_back("clamp_count" + suffix, std::to_string(g.clamp_count));
    diag.emplace_back("max_clamp" + suffix, format_double(g.max_clamp));
    diag.emplace_back("condition_estimate" + suffix, format_double(g.condition_estimate));
    diag.emplace_back("min_pivot" + suffix, format_double(g.min_pivot));
}

struct Curve {
    double alpha;
    double beta;
    double d;
};

/// x column plus one value column per solved curve.
ResultTable curves_table(const RunConfig& header_cfg, ProblemKind kind, const std::vector<SolveResult>& sols,
                         const std::vector<std::string>& labels) {
    ResultTable t;
    t.config = canonical_entries(header_cfg);
    t.diagnostics.emplace_back("h", format_double(sols.front().grid.h));
    t.diagnostics.emplace_back("n_interior", std::to_string(sols.front().values.size()));
    t.diagnostics.emplace_back("kernels", std::string(kernels::backend_name(kernels::active_backend())));
    t.columns.push_back("x");
    for (std::size_t k = 0; k < sols.size(); ++k) {
        const std::string suffix = labels.size() == 1 ? "" : "[" + labels[k] + "]";
        t.columns.push_back(value_column(kind) + suffix);
        add_solve_diagnostics(t.diagnostics, sols[k], suffix);
    }
    const auto& xs = sols.front().x;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<double> row{xs[i]};
        for (const auto& s : sols) row.push_back(s.values[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_single(const RunConfig& cfg, ProblemKind kind) {
    validate(cfg);
    const auto sol = solve(make_problem(cfg, kind, cfg.alpha, cfg.beta, cfg.d));
    return curves_table(cfg, kind, {sol}, {""});
}

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
}

/// Rethrows `ep` with `context` prepended, preserving the error category.
[[noreturn]] void rethrow_with_context(const std::exception_ptr& ep, const std::string& context) {
    try {
        std::rethrow_exception(ep);
    } catch (const ValidationError& e) {
        throw ValidationError(context + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(context + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

std::string file_token(double v) { return format_double(v); }

double gaussian_pdf(double x) { return std::exp(-x * x / 4.0) / (2.0 * std::sqrt(std::numbers::pi)); }

}  // namespace

ResultTable run_met(const RunConfig& cfg) { return run_single(cfg, ProblemKind::MeanExitTime); }

ResultTable run_escape(const RunConfig& cfg) { return run_single(cfg, ProblemKind::EscapeLeft); }

SweepResult run_sweep(const RunConfig& cfg) {
    validate(cfg);
    const auto alphas = cfg.alphas.empty() ? std::vector<double>{cfg.alpha} : cfg.alphas;
    const auto betas = cfg.betas.empty() ? std::vector<double>{cfg.beta} : cfg.betas;
    const auto ds = cfg.ds.empty() ? std::vector<double>{cfg.d} : cfg.ds;
    const bool by_alpha = cfg.panel == SweepPanel::Alpha;
    const auto& panel_values = by_alpha ? alphas : betas;
    const auto& curve_values = by_alpha ? betas : alphas;
    const char* panel_name = by_alpha ? "alpha" : "beta";
    const char* curve_name = by_alpha ? "beta" : "alpha";

    std::vector<Curve> tuples;
    for (double pv : panel_values)
        for (double d : ds)
            for (double cv : curve_values) tuples.push_back(by_alpha ? Curve{pv, cv, d} : Curve{cv, pv, d});

    std::vector<SolveResult> sols(tuples.size());
    std::vector<std::exception_ptr> errors(tuples.size());
    parallel_for(tuples.size(), cfg.jobs, [&](std::size_t i) {
        try {
            sols[i] = solve(make_problem(cfg, cfg.kind, tuples[i].alpha, tuples[i].beta, tuples[i].d));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        if (errors[i]) {
            rethrow_with_context(errors[i], "sweep tuple (alpha=" + format_double(tuples[i].alpha) +
                                                ", beta=" + format_double(tuples[i].beta) +
                                                ", d=" + format_double(tuples[i].d) + ")");
        }
    }

    SweepResult out;
    const std::string ext = cfg.format == OutputFormat::Csv ? ".csv" : ".json";
    nlohmann::ordered_json manifest;
    manifest["tool"] = kToolVersion;
    nlohmann::ordered_json mcfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : canonical_entries(cfg)) mcfg[k] = v;
    manifest["config"] = mcfg;
    manifest["panel"] = panel_name;
    manifest["curve_axis"] = curve_name;
    manifest["files"] = nlohmann::ordered_json::array();

    std::size_t next = 0;
    for (double pv : panel_values) {
        for (double d : ds) {
            const std::vector<SolveResult> panel(sols.begin() + static_cast<long>(next),
                                                 sols.begin() + static_cast<long>(next + curve_values.size()));
            next += curve_values.size();

            RunConfig header = cfg;
            std::vector<std::string> labels;
            if (curve_values.size() == 1) {
                header.subcommand = cfg.kind == ProblemKind::MeanExitTime ? Subcommand::Met : Subcommand::Escape;
                header.alpha = by_alpha ? pv : curve_values.front();
                header.beta = by_alpha ? curve_values.front() : pv;
                header.d = d;
                labels.emplace_back();
            } else {
                (by_alpha ? header.alphas : header.betas) = {pv};
                header.ds = {d};
                for (double cv : curve_values) labels.push_back(std::string(curve_name) + "=" + format_double(cv));
            }

            SweepFile f;
            f.name = levyexit::to_string(cfg.kind) + "_" + panel_name + file_token(pv) + "_d" + file_token(d) + ext;
            f.panel_value = pv;
            f.d = d;
            f.curves = curve_values;
            f.table = curves_table(header, cfg.kind, panel, labels);

            nlohmann::ordered_json entry;
            entry["file"] = f.name;
            entry[panel_name] = pv;
            entry["d"] = d;
            entry[std::string(curve_name) + "s"] = curve_values;
            manifest["files"].push_back(entry);
            out.files.push_back(std::move(f));
        }
    }
    out.manifest = manifest.dump(1) + "\n";
    return out;
}

ResultTable run_pdf(const RunConfig& cfg) {
    validate(cfg);
    const auto alphas = cfg.alphas.empty() ? std::vector<double>{cfg.alpha} : cfg.alphas;
    const auto betas = cfg.betas.empty() ? std::vector<double>{cfg.beta} : cfg.betas;
    std::vector<double> xs(cfg.nx);
    for (std::size_t i = 0; i < cfg.nx; ++i) {
        xs[i] = cfg.xmin + (cfg.xmax - cfg.xmin) * static_cast<double>(i) / static_cast<double>(cfg.nx - 1);
    }

    ResultTable t;
    t.config = canonical_entries(cfg);
    t.columns.push_back("x");
    const bool single = alphas.size() * betas.size() == 1;
    std::vector<std::vector<double>> cols;
    std::size_t fourier_points = 0, integral_points = 0, gaussian_points = 0, clamped = 0;
    double max_error = 0.0;
    for (double al : alphas) {
        for (double be : betas) {
            t.columns.push_back(single ? "pdf" : "pdf[alpha=" + format_double(al) + ";beta=" + format_double(be) + "]");
            std::vector<double> col(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (al == 2.0) {
                    col[i] = gaussian_pdf(xs[i]);
                    ++gaussian_points;
                    continue;
                }
                const auto params = StableNoiseParams::make(al, be, 0.0);
                bool done = false;
                // Below alpha = 0.3 the inversion integral cancels catastrophically.
                const bool try_fourier = cfg.pdf_method == PdfMethod::Fourier ||
                                         (cfg.pdf_method == PdfMethod::Auto && al > 0.3);
                if (try_fourier) {
                    try {
                        const auto r = stable_pdf(xs[i], params);
                        col[i] = r.value;
                        clamped += r.clamped ? 1 : 0;
                        max_error = std::max(max_error, r.error_estimate);
                        ++fourier_points;
                        done = true;
                    } catch (const NumericalError&) {
                        if (cfg.pdf_method == PdfMethod::Fourier) throw;
                    }
                }
                if (!done) {
                    col[i] = stable_pdf_integral(xs[i], params);
                    ++integral_points;
                }
            }
            cols.push_back(std::move(col));
        }
    }
    t.diagnostics.emplace_back("fourier_points", std::to_string(fourier_points));
    t.diagnostics.emplace_back("integral_points", std::to_string(integral_points));
    t.diagnostics.emplace_back("gaussian_points", std::to_string(gaussian_points));
    t.diagnostics.emplace_back("clamped_points", std::to_string(clamped));
    t.diagnostics.emplace_back("max_fourier_error_estimate", format_double(max_error));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<double> row{xs[i]};
        for (const auto& c : cols) row.push_back(c[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_simulate(const RunConfig& cfg) {
    validate(cfg);
    SimConfig sc;
    sc.dt = cfg.dt;
    sc.n_paths = cfg.paths;
    sc.max_steps = cfg.max_steps;
    sc.seed = cfg.seed;
    sc.workers = cfg.jobs;
    const auto st = simulate_exit(cfg.x0, cfg.a, cfg.b, make_drift(cfg),
                                  StableNoiseParams::make(cfg.alpha, cfg.beta, cfg.d), sc);
    ResultTable t;
    t.config = canonical_entries(cfg);
    t.diagnostics.emplace_back("met_is_lower_bound", st.n_censored > 0 ? "true" : "false");
    t.columns = {"met_mean", "met_stderr", "p_left", "p_left_stderr", "p_right",
                 "n_paths", "n_left", "n_right", "n_censored"};
    t.rows.push_back({st.met_mean, st.met_stderr, st.p_left, st.p_left_stderr, st.p_right,
                      static_cast<double>(st.n_paths), static_cast<double>(st.n_left),
                      static_cast<double>(st.n_right), static_cast<double>(st.n_censored)});
    return t;
}

ResultTable run_potential(const RunConfig& cfg) {
    validate(cfg);
    const auto p = TumorParams::make(cfg.theta, cfg.gamma);
    const auto ss = steady_states(p);
    ResultTable t;
    t.config = canonical_entries(cfg);
    t.diagnostics.emplace_back("x1", format_double(ss.x1));
    t.diagnostics.emplace_back("x2", format_double(ss.x2));
    t.diagnostics.emplace_back("x3", format_double(ss.x3));
    t.columns = {"x", "U", "f"};
    for (std::size_t i = 0; i < cfg.nx; ++i) {
        const double x =
            cfg.xmin + (cfg.xmax - cfg.xmin) * static_cast<double>(i) / static_cast<double>(cfg.nx - 1);
        t.rows.push_back({x, potential(x, p), tumor_drift(x, p)});
    }
    return t;
}

void execute(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    if (cfg.subcommand == Subcommand::Sweep) {
        if (cfg.output.empty()) throw ValidationError("config: sweep requires --output <directory>");
        const auto res = run_sweep(cfg);
        const std::filesystem::path dir(cfg.output);
        for (const auto& f : res.files) write_atomic(dir / f.name, render(f.table, cfg.format));
        write_atomic(dir / "manifest.json", res.manifest);
        out << "wrote " << res.files.size() << " file(s) and manifest.json to " << dir.string() << "\n";
        return;
    }
    ResultTable t;
    switch (cfg.subcommand) {
        case Subcommand::Met: t = run_met(cfg); break;
        case Subcommand::Escape: t = run_escape(cfg); break;
        case Subcommand::Pdf: t = run_pdf(cfg); break;
        case Subcommand::Simulate: t = run_simulate(cfg); break;
        case Subcommand::Potential: t = run_potential(cfg); break;
        case Subcommand::Sweep: break;
    }
    const std::string text = render(t, cfg.format);
    if (cfg.output.empty()) {
        out << text;
    } else {
        write_atomic(cfg.output, text);
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean exit time and escape probability under asymmetric alpha-stable Levy noise"};
    app.require_subcommand(1, 1);
    app.set_help_flag("--help", "print help and exit");
    app.set_version_flag("--version", kToolVersion);

    struct Flag {
        const char* name;
        const char* key;
        const char* help;
    };
    static const Flag flags[] = {
        {"--alpha", "alpha", "stability index in (0, 2)"},
        {"--beta", "beta", "skewness in [-1, 1]"},
        {"--d", "d", "Gaussian diffusion coefficient >= 0"},
        {"--drift", "drift", "tumor|zero"},
        {"--theta", "theta", "tumor saturation parameter"},
        {"--gamma", "gamma", "tumor immune-response strength"},
        {"--a", "a", "left end of the domain"},
        {"--b", "b", "right end of the domain"},
        {"--h", "h", "grid step"},
        {"--stencil", "stencil", "upwind|central discretization of the asymmetric compensator"},
        {"--x0", "x0", "simulation start point"},
        {"--paths", "paths", "number of Monte Carlo paths"},
        {"--dt", "dt", "Monte Carlo time step"},
        {"--seed", "seed", "Monte Carlo seed"},
        {"--max-steps", "max_steps", "Monte Carlo censoring horizon (steps)"},
        {"--kind", "kind", "sweep problem: met|escape"},
        {"--alphas", "alphas", "sweep/pdf list: v1,v2,... or start:step:stop"},
        {"--betas", "betas", "sweep/pdf list"},
        {"--ds", "ds", "sweep list of d values"},
        {"--panel", "panel", "sweep axis varying across files: alpha|beta"},
        {"--xmin", "xmin", "pdf/potential range start"},
        {"--xmax", "xmax", "pdf/potential range end"},
        {"--nx", "nx", "pdf/potential number of points"},
        {"--pdf-method", "pdf_method", "fourier|integral|auto"},
        {"--format", "format", "csv|json"},
        {"--output", "output", "output file (directory for sweep); stdout if omitted"},
        {"--jobs", "jobs", "worker threads (0: all cores); never changes results"},
    };
    std::vector<std::pair<const Flag*, CLI::Option*>> options;
    std::vector<std::string> values(std::size(flags));
    for (std::size_t i = 0; i < std::size(flags); ++i) {
        options.emplace_back(&flags[i], app.add_option(flags[i].name, values[i], flags[i].help));
    }
    std::string preset, preset_dir, config_file;
    app.add_option("--preset", preset, "named preset from presets/<name>.cfg");
    app.add_option("--preset-dir", preset_dir, "directory holding preset files");
    app.add_option("--config", config_file, "key = value config file, or a result file to replay");

    const std::pair<const char*, const char*> subs[] = {
        {"met", "mean exit time u(x)"},
        {"escape", "escape probability p(x) into (-inf, a]"},
        {"sweep", "parameter sweep (one file per panel) plus manifest.json"},
        {"pdf", "stable densities of L_1 ~ S_alpha(1, beta, 0)"},
        {"simulate", "Monte Carlo exit statistics"},
        {"potential", "tumor potential U(x) and drift f(x)"},
    };
    for (const auto& [name, help] : subs) {
        auto* sc = app.add_subcommand(name, help);
        sc->set_help_flag("--help", "print help and exit");
        sc->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string sub = app.get_subcommands().front()->get_name();
        KeyValues merged;
        auto merge = [&](const KeyValues& kv, const std::string& origin) {
            const auto it = kv.find("subcommand");
            if (it != kv.end() && it->second != sub) {
                throw ValidationError("config: " + origin + " is for subcommand '" + it->second +
                                      "', not '" + sub + "'");
            }
            for (const auto& [k, v] : kv) merged[k] = v;
        };
        if (!preset.empty()) merge(load_config_file(preset_path(preset, preset_dir)), "preset '" + preset + "'");
        if (!config_file.empty()) merge(load_config_file(config_file), "config '" + config_file + "'");
        KeyValues cli_kv;
        for (std::size_t i = 0; i < options.size(); ++i) {
            if (options[i].second->count() > 0) cli_kv[options[i].first->key] = values[i];
        }
        merge(cli_kv, "command line");
        merged["subcommand"] = sub;
        const RunConfig cfg = apply_overrides(RunConfig{}, merged);
        validate(cfg);
        execute(cfg, out);
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace levyexit::cli
