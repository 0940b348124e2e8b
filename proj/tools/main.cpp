// focrlb: CRLB bounds for forced-oscillation parameter estimates in colored
// power-system ambient noise, plus Monte Carlo validation. Emits CSV.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "focrlb/config.hpp"
#include "focrlb/csv.hpp"
#include "focrlb/monte_carlo.hpp"
#include "focrlb/sweep.hpp"

namespace {

using namespace focrlb;

struct CommonOpts {
    std::string config_path;
    std::string out_path = "-";
    unsigned jobs = 1;
    bool reproducible = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file")->required();
    cmd->add_option("--out", opts.out_path, "output CSV path ('-' for stdout)");
    cmd->add_option("--jobs", opts.jobs, "worker thread cap")->check(CLI::PositiveNumber);
    cmd->add_flag("--reproducible", opts.reproducible,
                  "suppress the timestamp header comment");
}

void write_header(std::ostream& out, const std::string& subcommand, bool reproducible) {
    if (!reproducible) {
        const std::time_t now =
            std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%FT%TZ", std::gmtime(&now));
        out << "# focrlb " << subcommand << " generated " << stamp << "\n";
    }
}

int write_output(const std::string& out_path, const std::string& content) {
    if (out_path == "-") {
        std::cout << content;
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file " << out_path << "\n";
        return 1;
    }
    f << content;
    return 0;
}

int run_sweep_command(const CommonOpts& opts, SweepKind kind, const char* name) {
    const AppConfig config = parse_config(opts.config_path);
    if (!config.sweep)
        throw ValidationError("sweep", "missing required block for this subcommand");
    if (config.sweep->kind != kind)
        throw ValidationError("sweep.kind", std::string("config kind does not match the ") +
                                                name + " subcommand");

    const auto rows = run_sweep(config.filter, *config.sweep, opts.jobs);

    std::ostringstream out;
    write_header(out, name, opts.reproducible);
    out << "swept_value,std_amp,std_freq_hz,std_f0,std_phase_rad,fim_condition,error\n";
    std::size_t failures = 0;
    for (const auto& row : rows) {
        if (row.error.empty()) {
            out << csv_double(row.swept_value) << ',' << csv_double(row.bounds.std_amp)
                << ',' << csv_double(row.bounds.std_freq_hz) << ','
                << csv_double(row.bounds.std_f0) << ',' << csv_double(row.bounds.std_phi)
                << ',' << csv_double(row.bounds.condition_estimate) << ",\n";
        } else {
            ++failures;
            out << csv_double(row.swept_value) << ",,,,,," << csv_sanitize(row.error)
                << "\n";
        }
    }
    const int rc = write_output(opts.out_path, out.str());
    if (rc != 0) return rc;
    return failures == rows.size() ? 2 : 0;
}

int run_psd_command(const CommonOpts& opts, std::size_t points) {
    const AppConfig config = parse_config(opts.config_path);
    const auto rows = run_psd(config.filter, points);

    std::ostringstream out;
    write_header(out, "psd", opts.reproducible);
    out << "f_hz,psd_two_sided,psd_one_sided\n";
    for (const auto& row : rows)
        out << csv_double(row.f_hz) << ',' << csv_double(row.two_sided) << ','
            << csv_double(row.one_sided) << "\n";
    return write_output(opts.out_path, out.str());
}

int run_mc_command(const CommonOpts& opts) {
    const AppConfig config = parse_config(opts.config_path);
    const McConfig mc = make_mc_config(config);
    const McResult result = run_mc(mc, opts.jobs);

    const double fs = config.filter.fs_hz();
    struct Line {
        const char* name;
        double truth;
        ParamStats stats;
        double unit_scale; // normalized -> reported units
    };
    const Line lines[3] = {
        {"amp", mc.truth.amp(), result.amp, 1.0},
        {"freq_hz", mc.truth.f0() * fs, result.f0, fs},
        {"phase_rad", mc.truth.phi(), result.phi, 1.0},
    };

    std::ostringstream out;
    write_header(out, "montecarlo", opts.reproducible);
    out << "param,truth,sample_mean,sample_var,crlb_var,ratio,runs,failed_runs\n";
    for (const auto& line : lines) {
        const double s = line.unit_scale;
        out << line.name << ',' << csv_double(line.truth) << ','
            << csv_double(line.truth + line.stats.bias * s) << ','
            << csv_double(line.stats.sample_var * s * s) << ','
            << csv_double(line.stats.crlb_var * s * s) << ','
            << csv_double(line.stats.ratio) << ',' << result.runs << ','
            << result.failed_runs << "\n";
    }
    const int rc = write_output(opts.out_path, out.str());
    if (rc != 0) return rc;
    return result.failed_runs == result.runs ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CRLB bounds for forced-oscillation estimation in ambient power-system noise"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::size_t psd_points = 1024;

    CLI::App* sweep_freq = app.add_subcommand(
        "sweep-frequency", "STD bounds vs FO frequency (Hz grid)");
    CLI::App* sweep_amp = app.add_subcommand(
        "sweep-amplitude", "STD bounds vs FO amplitude");
    CLI::App* sweep_len = app.add_subcommand(
        "sweep-length", "STD bounds vs record length N");
    CLI::App* psd_cmd = app.add_subcommand("psd", "export the model PSD");
    CLI::App* mc_cmd = app.add_subcommand(
        "montecarlo", "validate the bounds with a Monte Carlo estimator study");

    for (CLI::App* cmd : {sweep_freq, sweep_amp, sweep_len, psd_cmd, mc_cmd})
        add_common(cmd, opts);
    psd_cmd->add_option("--points", psd_points, "PSD grid size on [0, fs/2]")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep_freq->parsed())
            return run_sweep_command(opts, SweepKind::frequency, "sweep-frequency");
        if (sweep_amp->parsed())
            return run_sweep_command(opts, SweepKind::amplitude, "sweep-amplitude");
        if (sweep_len->parsed())
            return run_sweep_command(opts, SweepKind::length, "sweep-length");
        if (psd_cmd->parsed()) return run_psd_command(opts, psd_points);
        if (mc_cmd->parsed()) return run_mc_command(opts);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
