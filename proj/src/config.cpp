#include "focrlb/config.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace focrlb {
namespace {

using nlohmann::json;

struct Ctx {
    std::vector<Violation> violations;

    void add(std::string path, std::string message) {
        violations.push_back({std::move(path), std::move(message)});
    }

    const json* object(const json& j, const char* key, const std::string& path,
                       bool required = true) {
        if (!j.contains(key)) {
            if (required) add(path, "missing required object");
            return nullptr;
        }
        if (!j.at(key).is_object()) {
            add(path, "must be an object");
            return nullptr;
        }
        return &j.at(key);
    }

    std::optional<double> number(const json& j, const char* key, const std::string& path,
                                 bool required = true) {
        if (!j.contains(key)) {
            if (required) add(path, "missing required number");
            return std::nullopt;
        }
        if (!j.at(key).is_number()) {
            add(path, "must be a number");
            return std::nullopt;
        }
        const double v = j.at(key).get<double>();
        if (!std::isfinite(v)) {
            add(path, "must be finite");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::int64_t> integer(const json& j, const char* key,
                                        const std::string& path, bool required = true) {
        if (!j.contains(key)) {
            if (required) add(path, "missing required integer");
            return std::nullopt;
        }
        if (!j.at(key).is_number_integer() && !j.at(key).is_number_unsigned()) {
            add(path, "must be an integer");
            return std::nullopt;
        }
        return j.at(key).get<std::int64_t>();
    }
};

std::optional<std::vector<double>> parse_number_array(Ctx& ctx, const json& j,
                                                      const std::string& path) {
    if (!j.is_array() || j.empty()) {
        ctx.add(path, "must be a non-empty array of numbers");
        return std::nullopt;
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            ctx.add(path + "[" + std::to_string(i) + "]", "must be a number");
            return std::nullopt;
        }
        out.push_back(j[i].get<double>());
    }
    return out;
}

std::optional<std::vector<double>> parse_grid(Ctx& ctx, const json& sweep,
                                              const std::string& path) {
    if (!sweep.contains("grid")) {
        ctx.add(path, "missing required grid (array or {start, stop, count})");
        return std::nullopt;
    }
    const json& g = sweep.at("grid");
    if (g.is_array()) return parse_number_array(ctx, g, path);
    if (g.is_object()) {
        Ctx local;
        const auto start = local.number(g, "start", path + ".start");
        const auto stop = local.number(g, "stop", path + ".stop");
        const auto count = local.integer(g, "count", path + ".count");
        for (auto& v : local.violations) ctx.violations.push_back(std::move(v));
        if (!start || !stop || !count) return std::nullopt;
        if (*count < 1) {
            ctx.add(path + ".count", "must be >= 1");
            return std::nullopt;
        }
        if (*count > 1 && !(*stop > *start)) {
            ctx.add(path, "stop must exceed start");
            return std::nullopt;
        }
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(*count));
        for (std::int64_t i = 0; i < *count; ++i)
            out.push_back(*count == 1 ? *start
                                      : *start + static_cast<double>(i) * (*stop - *start) /
                                                     static_cast<double>(*count - 1));
        return out;
    }
    ctx.add(path, "must be an array or {start, stop, count}");
    return std::nullopt;
}

} // namespace

AppConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string(), "cannot open config file");

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string(), std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError(path.string(), "document must be an object");

    Ctx ctx;
    double fs_hz = 0.0;
    double sigma_w2 = 0.0;
    std::optional<ModalSpec> modal;
    std::optional<std::pair<std::vector<double>, std::vector<double>>> rational;

    if (const json* model = ctx.object(doc, "model", "model")) {
        if (auto v = ctx.number(*model, "sigma_w2", "model.sigma_w2")) {
            if (*v > 0.0)
                sigma_w2 = *v;
            else
                ctx.add("model.sigma_w2", "must be > 0");
        }
        if (auto v = ctx.number(*model, "fs_hz", "model.fs_hz")) {
            if (*v > 0.0)
                fs_hz = *v;
            else
                ctx.add("model.fs_hz", "must be > 0");
        }

        const bool has_modes = model->contains("modes");
        const bool has_rational = model->contains("rational");
        if (has_modes == has_rational) {
            ctx.add("model", "exactly one of 'modes' or 'rational' is required");
        } else if (has_modes) {
            const json& modes = model->at("modes");
            if (!modes.is_array() || modes.empty()) {
                ctx.add("model.modes", "must be a non-empty array");
            } else {
                ModalSpec spec;
                for (std::size_t i = 0; i < modes.size(); ++i) {
                    const std::string mp = "model.modes[" + std::to_string(i) + "]";
                    if (!modes[i].is_object()) {
                        ctx.add(mp, "must be an object");
                        continue;
                    }
                    Mode mode{0.0, 0.0, 0.0};
                    if (auto v = ctx.number(modes[i], "freq_hz", mp + ".freq_hz")) {
                        mode.freq_hz = *v;
                        if (fs_hz > 0.0 && !(*v > 0.0 && *v < fs_hz / 2.0))
                            ctx.add(mp + ".freq_hz", "must be in (0, fs_hz/2)");
                    }
                    if (auto v = ctx.number(modes[i], "damping_ratio", mp + ".damping_ratio")) {
                        mode.damping_ratio = *v;
                        if (!(*v > 0.0 && *v < 1.0))
                            ctx.add(mp + ".damping_ratio", "must be in (0, 1)");
                    }
                    if (auto v = ctx.number(modes[i], "gain", mp + ".gain")) {
                        mode.gain = *v;
                        if (!(*v >= 0.0)) ctx.add(mp + ".gain", "must be >= 0");
                    }
                    spec.modes.push_back(mode);
                }
                modal = std::move(spec);
            }
        } else {
            const json& rat = model->at("rational");
            if (!rat.is_object()) {
                ctx.add("model.rational", "must be an object");
            } else {
                std::optional<std::vector<double>> num, den;
                if (rat.contains("num"))
                    num = parse_number_array(ctx, rat.at("num"), "model.rational.num");
                else
                    ctx.add("model.rational.num", "missing required array");
                if (rat.contains("den"))
                    den = parse_number_array(ctx, rat.at("den"), "model.rational.den");
                else
                    ctx.add("model.rational.den", "missing required array");
                if (num && den) {
                    if ((*den)[0] != 1.0)
                        ctx.add("model.rational.den", "leading coefficient must be 1");
                    else
                        rational = std::make_pair(std::move(*num), std::move(*den));
                }
            }
        }
    }

    double fo_amp = 0.0, fo_freq_hz = 0.0, fo_phase = 0.0;
    if (const json* fo = ctx.object(doc, "fo", "fo")) {
        if (auto v = ctx.number(*fo, "amp", "fo.amp")) {
            fo_amp = *v;
            if (!(*v > 0.0)) ctx.add("fo.amp", "must be > 0");
        }
        if (auto v = ctx.number(*fo, "freq_hz", "fo.freq_hz")) {
            fo_freq_hz = *v;
            if (fs_hz > 0.0 && !(*v > 0.0 && *v < fs_hz / 2.0))
                ctx.add("fo.freq_hz", "must be in (0, fs_hz/2), exclusive of Nyquist");
        }
        if (auto v = ctx.number(*fo, "phase_rad", "fo.phase_rad")) fo_phase = *v;
    }

    std::optional<SweepKind> sweep_kind;
    std::optional<std::vector<double>> sweep_grid;
    std::size_t sweep_n = 0;
    if (doc.contains("sweep")) {
        if (const json* sweep = ctx.object(doc, "sweep", "sweep")) {
            if (!sweep->contains("kind") || !sweep->at("kind").is_string()) {
                ctx.add("sweep.kind", "must be one of frequency|amplitude|length");
            } else {
                const std::string k = sweep->at("kind").get<std::string>();
                if (k == "frequency")
                    sweep_kind = SweepKind::frequency;
                else if (k == "amplitude")
                    sweep_kind = SweepKind::amplitude;
                else if (k == "length")
                    sweep_kind = SweepKind::length;
                else
                    ctx.add("sweep.kind", "unknown kind '" + k + "'");
            }

            sweep_grid = parse_grid(ctx, *sweep, "sweep.grid");
            if (sweep_grid) {
                const auto& g = *sweep_grid;
                for (std::size_t i = 1; i < g.size(); ++i)
                    if (!(g[i] > g[i - 1])) {
                        ctx.add("sweep.grid", "must be strictly increasing");
                        break;
                    }
                if (sweep_kind == SweepKind::frequency && fs_hz > 0.0) {
                    for (double v : g)
                        if (!(v > 0.0 && v < fs_hz / 2.0)) {
                            ctx.add("sweep.grid", "frequency grid must lie in (0, fs_hz/2)");
                            break;
                        }
                } else if (sweep_kind == SweepKind::amplitude) {
                    for (double v : g)
                        if (!(v > 0.0)) {
                            ctx.add("sweep.grid", "amplitude grid must be positive");
                            break;
                        }
                } else if (sweep_kind == SweepKind::length) {
                    for (double v : g)
                        if (!(v >= 8.0) || v != std::floor(v)) {
                            ctx.add("sweep.grid", "length grid must be integers >= 8");
                            break;
                        }
                }
            }

            if (sweep_kind != SweepKind::length) {
                if (auto v = ctx.integer(*sweep, "n_samples", "sweep.n_samples")) {
                    if (*v >= 8)
                        sweep_n = static_cast<std::size_t>(*v);
                    else
                        ctx.add("sweep.n_samples", "must be >= 8");
                }
            } else if (sweep_grid && !sweep_grid->empty()) {
                sweep_n = static_cast<std::size_t>(sweep_grid->back());
            }
        }
    }

    std::optional<McSettings> mc;
    if (doc.contains("mc")) {
        if (const json* m = ctx.object(doc, "mc", "mc")) {
            McSettings s{};
            s.burn_in_factor = 10.0;
            s.estimator = EstimatorOptions{};
            if (auto v = ctx.integer(*m, "runs", "mc.runs")) {
                if (*v >= 1)
                    s.runs = static_cast<std::size_t>(*v);
                else
                    ctx.add("mc.runs", "must be >= 1");
            }
            if (auto v = ctx.integer(*m, "seed", "mc.seed"))
                s.seed = static_cast<std::uint64_t>(*v);
            if (auto v = ctx.integer(*m, "n_samples", "mc.n_samples")) {
                if (*v >= 8)
                    s.n_samples = static_cast<std::size_t>(*v);
                else
                    ctx.add("mc.n_samples", "must be >= 8");
            }
            if (auto v = ctx.number(*m, "burn_in_factor", "mc.burn_in_factor", false)) {
                if (*v >= 10.0)
                    s.burn_in_factor = *v;
                else
                    ctx.add("mc.burn_in_factor", "must be >= 10");
            }
            if (auto v = ctx.integer(*m, "freq_grid_oversample", "mc.freq_grid_oversample",
                                     false)) {
                if (*v >= 1)
                    s.estimator.freq_grid_oversample = static_cast<std::size_t>(*v);
                else
                    ctx.add("mc.freq_grid_oversample", "must be >= 1");
            }
            if (auto v = ctx.number(*m, "refine_tol", "mc.refine_tol", false)) {
                if (*v > 0.0)
                    s.estimator.refine_tol = *v;
                else
                    ctx.add("mc.refine_tol", "must be > 0");
            }
            mc = s;
        }
    }

    if (!ctx.violations.empty()) throw ValidationError(std::move(ctx.violations));

    // all invariants hold; constructing the domain objects can still surface
    // model-level problems (e.g. an unstable user-supplied filter)
    try {
        RationalFilter filter =
            modal ? build_surrogate(*modal, sigma_w2, fs_hz)
                  : RationalFilter(std::move(rational->first), std::move(rational->second),
                                   sigma_w2, fs_hz);
        FoParams fo(fo_amp, fo_freq_hz / fs_hz, fo_phase);

        std::optional<SweepSpec> sweep;
        if (sweep_kind && sweep_grid)
            sweep = SweepSpec{*sweep_kind, std::move(*sweep_grid), fo, sweep_n};
        return AppConfig{std::move(filter), fo, std::move(sweep), mc};
    } catch (const std::invalid_argument& e) {
        throw ValidationError("model", e.what());
    }
}

McConfig make_mc_config(const AppConfig& config) {
    if (!config.mc) throw ValidationError("mc", "missing required block");
    const McSettings& s = *config.mc;
    const std::size_t energy_len = impulse_energy_length(config.filter, 0.99);
    const auto burn_in = static_cast<std::size_t>(
        std::ceil(s.burn_in_factor * static_cast<double>(energy_len)));
    return McConfig{s.runs,         s.seed,   s.n_samples, config.filter,
                    config.fo,      burn_in,  s.estimator};
}

} // namespace focrlb
