#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include "report.hpp"
#include "specprobe/csv.hpp"
#include "specprobe/errors.hpp"
#include "specprobe/kernel.hpp"
#include "specprobe/persistence.hpp"
#include "specprobe/probe.hpp"
#include "specprobe/wkb.hpp"

#ifndef SPECPROBE_VERSION
#define SPECPROBE_VERSION "unknown"
#endif

namespace specprobe::cli {

namespace {

namespace fs = std::filesystem;

class Session {
public:
    Session(const RunConfig& cfg, std::ostream& out)
        : cfg_(cfg), out_(out), dir_(cfg.out), model_(cfg.potential()) {}

    const fs::path& dir() const { return dir_; }

    void prepare() { fs::create_directories(dir_); }

    SpectrumTable table(int n, int lmax) const {
        const Channel channel(cfg_.d, n);
        if (!cfg_.cache) return solve_spectrum(channel, model_, lmax, cfg_.solver());
        const auto path = dir_ / ("spectrum_d" + std::to_string(cfg_.d) + "_n" + std::to_string(n) + ".json");
        return load_or_solve(path, channel, model_, lmax, cfg_.solver());
    }

    std::optional<IndexWindow> fit_window() const {
        if (cfg_.fit_window == "auto") return std::nullopt;
        const auto [a, b] = parse_level_range(cfg_.fit_window);
        return IndexWindow{static_cast<std::size_t>(a), static_cast<std::size_t>(b) + 1};
    }

    int validate() {
        const auto report = validate_assumptions(model_, model_.threshold(), 100.0, 2000);
        out_ << "model " << model_.id() << "  c = " << model_.growth_index() << '\n';
        out_ << "  convex            " << (report.convex ? "yes" : "no") << "  (min V'' = " << report.min_convexity << ")\n";
        out_ << "  growth r V' >= 2cV " << (report.growth ? "yes" : "no") << "  (margin " << report.worst_growth_margin << ")\n";
        out_ << "  c > 1             " << (report.superquadratic ? "yes" : "no") << "  (max admissible c = "
             << report.max_admissible_c << ")\n";
        out_ << "  bounded ratios    " << (report.bounded_ratios ? "yes" : "no") << '\n';
        if (report.pass()) {
            out_ << "assumptions hold\n";
            return exit_ok;
        }
        if (model_.is_harmonic() && report.convex && report.growth && report.bounded_ratios) {
            out_ << "harmonic calibration model accepted (c = 1)\n";
            return exit_ok;
        }
        out_ << "assumptions violated\n";
        return exit_validation;
    }

    void spectrum(bool print_gaps) {
        for (std::size_t k = 0; k < cfg_.n.size(); ++k) {
            const auto t = table(cfg_.n[k], cfg_.lmax);
            write_spectrum_csv(t, dir_ / "spectrum.csv", k > 0);
            out_ << "n=" << cfg_.n[k] << ": " << t.pairs.size() << " levels, lambda_0 = " << format_real(t.pairs.front().lambda)
                 << ", lambda_" << t.l_max() << " = " << format_real(t.pairs.back().lambda) << '\n';
            if (print_gaps) {
                const double c = model_.growth_index();
                const auto fit = gap_scaling(t, fit_window());
                out_ << "  gap exponent " << fit.exponent << " (theory " << (c - 1) / (2 * c) << ", r^2 "
                     << fit.r_squared << ")\n";
            }
        }
    }

    void wkb() {
        std::ofstream appendix;
        for (std::size_t k = 0; k < cfg_.n.size(); ++k) {
            const auto t = table(cfg_.n[k], cfg_.lmax);
            const auto rows = summarize(t);
            write_wkb_csv(t.channel, rows, dir_ / "wkb.csv", k > 0);
            if (rows.size() >= 20) {
                const auto fit = amplitude_scaling(rows, fit_window());
                const double c = model_.growth_index();
                out_ << "n=" << cfg_.n[k] << ": amplitude exponent " << fit.exponent << " (lower bound "
                     << (c - 1) / (4 * c) << ")\n";
            }
            write_appendix(t.channel, k > 0);
        }
    }

    void probe() {
        const int lmax = std::max(cfg_.lmax, cfg_.l_last + 5);
        for (std::size_t k = 0; k < cfg_.n.size(); ++k) {
            const auto t = table(cfg_.n[k], lmax);
            const auto phi = make_bump(cfg_.phi_center, cfg_.phi_halfwidth, t.grid);
            const auto psi = make_bump(cfg_.psi_center, cfg_.psi_halfwidth, t.grid);
            const auto seq = probe_sequence(t, phi, psi, WindowSpec{cfg_.sigma}, cfg_.l_first, cfg_.l_last);
            write_probe_csv(t.channel, seq.points, dir_ / "probe.csv", k > 0);
            out_ << "n=" << cfg_.n[k] << ": |G| exponent " << seq.fit.exponent << " (theory "
                 << -1 / (2 * model_.growth_index()) << "), lower-bound constant " << seq.lower_bound_const << '\n';
        }
    }

    void kernel() {
        const int n = cfg_.n.front();
        const auto t = table(n, std::max(cfg_.lmax, cfg_.L));
        export_kernel_grid(t, linspace_step(cfg_.t.a, cfg_.t.b, cfg_.t.step), linspace_step(cfg_.r.a, cfg_.r.b, cfg_.r.step),
                           linspace_step(cfg_.s.a, cfg_.s.b, cfg_.s.step), cfg_.L, dir_ / "kernel.csv");
        out_ << "n=" << n << ": kernel.csv written, Parseval sum " << format_real(parseval(t, cfg_.L)) << " (expected "
             << cfg_.L + 1 << ")\n";
        if (cfg_.n.size() > 1) out_ << "  kernel export covers the first channel only\n";
    }

    void finish(const std::string& command) {
        nlohmann::json run;
        run["tool"] = "specprobe";
        run["version"] = SPECPROBE_VERSION;
        run["command"] = command;
        run["config"] = to_json(cfg_);
        std::ofstream f(dir_ / "run.json", std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + (dir_ / "run.json").string());
        f << run.dump(2) << '\n';
        if (!f) throw IoError("write failed for " + (dir_ / "run.json").string());
        write_report(dir_, cfg_);
    }

private:
    void write_appendix(const Channel& channel, bool append) {
        const auto path = dir_ / "appendix.csv";
        std::ofstream f(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
        if (!f) throw IoError("cannot write " + path.string());
        if (!append) f << "n,lambda,epsilon,T,I1,I2,I3,total,band_halfwidth,band_estimate\n";
        for (double lam : cfg_.ladder) {
            const auto a = appendix_error_integral(channel, model_, lam, cfg_.epsilon);
            const double T = turning_points(channel, model_, lam).T;
            f << channel.n() << ',' << format_real(lam) << ',' << format_real(cfg_.epsilon) << ',' << format_real(T) << ','
              << format_real(a.I1) << ',' << format_real(a.I2) << ',' << format_real(a.I3) << ',' << format_real(a.total)
              << ',' << format_real(a.band_halfwidth) << ',' << format_real(a.band_estimate) << '\n';
        }
        if (!f) throw IoError("write failed for " + path.string());
    }

    const RunConfig& cfg_;
    std::ostream& out_;
    fs::path dir_;
    PotentialModel model_;
};

int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& out) {
    validate_config(cfg);
    Session s(cfg, out);
    if (command == "validate") return s.validate();
    s.prepare();
    if (command == "spectrum") s.spectrum(false);
    else if (command == "gaps") s.spectrum(true);
    else if (command == "wkb") s.wkb();
    else if (command == "probe") s.probe();
    else if (command == "kernel") s.kernel();
    else if (command != "report") throw ArgumentError("unknown command: " + command);
    s.finish(command);
    if (command == "report") out << "report written to " << (s.dir() / "report.md").string() << '\n';
    return exit_ok;
}

}  // namespace

int run(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(command, cfg, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const ThresholdError& e) {
        err << "numerical failure: " << e.what() << " (computed lambda_0 = " << e.lambda_zero() << ")\n";
        return exit_numerical;
    } catch (const TruncationError& e) {
        err << "numerical failure: " << e.what() << " (tail bound " << e.tail_bound() << ")\n";
        return exit_numerical;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const ArgumentError& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_validation;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral probe of radial Schrodinger operators with super-quadratic potentials", "specprobe"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
    std::vector<std::pair<CLI::App*, std::vector<std::pair<const ConfigKey*, CLI::Option*>>>> subs;
    const std::map<std::string, std::string> descriptions = {
        {"validate", "check the structural hypotheses on the potential"},
        {"spectrum", "solve eigenpairs and write spectrum.csv"},
        {"wkb", "semiclassical summaries (wkb.csv) and the turning-point error integral (appendix.csv)"},
        {"gaps", "solve eigenpairs and fit the level-spacing exponent"},
        {"probe", "evaluate the windowed probe along the spectrum (probe.csv)"},
        {"kernel", "export truncated channel kernels (kernel.csv)"},
        {"report", "write report.md from the artifacts in the output directory"}};

    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        sub->add_option("--config", config_path, "ini-style file with [section] key = value entries");
        std::vector<std::pair<const ConfigKey*, CLI::Option*>> opts;
        for (const auto& key : config_keys()) {
            const auto id = key.section + "." + key.key;
            CLI::Option* opt = key.is_flag ? sub->add_flag(key.flag, switches[id], key.help)
                                           : sub->add_option(key.flag, values[id], key.help);
            opts.emplace_back(&key, opt);
        }
        subs.emplace_back(sub, std::move(opts));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_validation;
    }

    RunConfig cfg;
    std::string command;
    try {
        if (const char* env = std::getenv("SPECPROBE_OUT"); env && *env) cfg.out = env;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        for (const auto& [sub, opts] : subs) {
            if (!sub->parsed()) continue;
            command = sub->get_name();
            for (const auto& [key, opt] : opts) {
                if (opt->count() == 0) continue;
                const auto id = key->section + "." + key->key;
                key->set(cfg, key->is_flag ? "true" : values[id]);
            }
        }
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_validation;
    }
    return run(command, cfg, out, err);
}

}  // namespace specprobe::cli
