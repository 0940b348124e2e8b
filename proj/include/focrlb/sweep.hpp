// Bound sweeps over FO frequency, FO amplitude, or record length, and PSD
// export. These back the CLI subcommands.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "focrlb/crlb_engine.hpp"
#include "focrlb/fo_signal.hpp"
#include "focrlb/noise_model.hpp"

namespace focrlb {

enum class SweepKind { frequency, amplitude, length };

/// One sweep: the grid is in the swept parameter's units (Hz for frequency,
/// signal units for amplitude, samples for length); `fixed` carries the
/// non-swept FO parameters and n_samples the fixed record length (ignored for
/// length sweeps).
struct SweepSpec {
    SweepKind kind;
    std::vector<double> grid;
    FoParams fixed;
    std::size_t n_samples;
};

struct SweepRow {
    double swept_value = 0.0;
    CrlbBounds bounds = {};
    std::string error; ///< empty on success
};

/// Evaluates the CRLB at every grid point, in grid order. The autocovariance
/// and SPD factorization are computed once per (filter, N) and shared across
/// points. Per-point numerical failures are recorded in the row's error field
/// and the sweep continues.
std::vector<SweepRow> run_sweep(const RationalFilter& filter, const SweepSpec& spec,
                                unsigned jobs = 1);

struct PsdRow {
    double f_hz;
    double two_sided; ///< per-Hz density: normalized PSD / fs
    double one_sided; ///< 2x two_sided for 0 < f < fs/2, equal at the edges
};

/// PSD on a uniform grid of grid_size points spanning [0, fs/2] inclusive.
std::vector<PsdRow> run_psd(const RationalFilter& filter, std::size_t grid_size);

} // namespace focrlb
