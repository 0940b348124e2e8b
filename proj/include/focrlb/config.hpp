// JSON config ingestion for the CLI.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "focrlb/fo_signal.hpp"
#include "focrlb/monte_carlo.hpp"
#include "focrlb/noise_model.hpp"
#include "focrlb/sweep.hpp"

namespace focrlb {

/// Monte Carlo settings as they appear in the config document. burn_in_factor
/// scales the computed 99%-energy impulse-response length into the burn-in
/// sample count (must be >= 10).
struct McSettings {
    std::size_t runs;
    std::uint64_t seed;
    double burn_in_factor;
    std::size_t n_samples;
    EstimatorOptions estimator;
};

struct AppConfig {
    RationalFilter filter;
    FoParams fo;
    std::optional<SweepSpec> sweep;
    std::optional<McSettings> mc;
};

/// Parses and validates one JSON document. Every violation is collected and
/// reported with its field path in a single ValidationError; nothing is
/// reported piecemeal.
///
/// Document layout:
///   model: { modes: [{freq_hz, damping_ratio, gain}, ...] |
///            rational: {num: [...], den: [...]},
///            sigma_w2, fs_hz }
///   fo:    { amp, freq_hz, phase_rad }
///   sweep: { kind: "frequency"|"amplitude"|"length",
///            grid: [v, ...] | {start, stop, count},
///            n_samples }                                   (optional block)
///   mc:    { runs, seed, n_samples, burn_in_factor = 10,
///            freq_grid_oversample = 8, refine_tol = 1e-10 } (optional block)
AppConfig parse_config(const std::filesystem::path& path);

/// Builds the McConfig for run_mc from a parsed document, deriving burn_in
/// from the measured impulse-response energy length.
McConfig make_mc_config(const AppConfig& config);

} // namespace focrlb
