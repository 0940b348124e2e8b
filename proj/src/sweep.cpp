#include "focrlb/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "focrlb/covariance.hpp"
#include "focrlb/parallel.hpp"

namespace focrlb {
namespace {

SweepRow evaluate_point(const RationalFilter& filter, const FoParams& p,
                        const ToeplitzCovariance& cov, double swept_value) {
    SweepRow row;
    row.swept_value = swept_value;
    try {
        row.bounds = crlb(fisher(p, cov), filter.fs_hz());
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const RationalFilter& filter, const SweepSpec& spec,
                                unsigned jobs) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (!(spec.grid[i] > spec.grid[i - 1]))
            throw std::invalid_argument("sweep grid must be strictly increasing");

    const double fs = filter.fs_hz();
    std::vector<SweepRow> rows(spec.grid.size());

    const auto fail_all = [&](const std::string& message) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i].swept_value = spec.grid[i];
            rows[i].error = message;
        }
        return rows;
    };

    if (spec.kind == SweepKind::length) {
        for (double g : spec.grid)
            if (!(g >= 8.0) || g != std::floor(g))
                throw std::invalid_argument("length grid entries must be integers >= 8");
        const auto max_n = static_cast<std::size_t>(spec.grid.back());

        // one autocovariance at the longest record covers every N
        AutocovarianceSeq r{{1.0}};
        try {
            r = autocovariance(filter, max_n - 1);
        } catch (const Error& e) {
            return fail_all(e.what());
        }

        parallel_for(rows.size(), jobs, [&](std::size_t i) {
            const auto n = static_cast<std::size_t>(spec.grid[i]);
            const ToeplitzCovariance cov(r, n);
            rows[i] = evaluate_point(filter, spec.fixed, cov, spec.grid[i]);
        });
        return rows;
    }

    // frequency / amplitude sweeps share one (filter, N) factorization
    if (spec.n_samples < 8) throw std::invalid_argument("n_samples must be >= 8");
    try {
        const AutocovarianceSeq r = autocovariance(filter, spec.n_samples - 1);
        const ToeplitzCovariance cov(r, spec.n_samples);
        cov.ensure_factored();

        parallel_for(rows.size(), jobs, [&](std::size_t i) {
            const double g = spec.grid[i];
            try {
                const FoParams p =
                    spec.kind == SweepKind::frequency
                        ? FoParams(spec.fixed.amp(), g / fs, spec.fixed.phi())
                        : FoParams(g, spec.fixed.f0(), spec.fixed.phi());
                rows[i] = evaluate_point(filter, p, cov, g);
            } catch (const std::invalid_argument& e) {
                rows[i].swept_value = g;
                rows[i].error = e.what();
            }
        });
        return rows;
    } catch (const Error& e) {
        return fail_all(e.what());
    }
}

std::vector<PsdRow> run_psd(const RationalFilter& filter, std::size_t grid_size) {
    if (grid_size < 2) throw std::invalid_argument("psd grid needs at least 2 points");
    const double fs = filter.fs_hz();
    std::vector<PsdRow> rows;
    rows.reserve(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double f_norm =
            0.5 * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        const double two_sided = psd(filter, f_norm) / fs;
        const bool interior = i > 0 && i + 1 < grid_size;
        rows.push_back({f_norm * fs, two_sided, interior ? 2.0 * two_sided : two_sided});
    }
    return rows;
}

} // namespace focrlb
