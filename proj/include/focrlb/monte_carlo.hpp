// Monte Carlo validation of the CRLB: synthetic ambient data plus FO,
// whitened nonlinear least-squares estimation, sample statistics vs bound.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "focrlb/covariance.hpp"
#include "focrlb/crlb_engine.hpp"
#include "focrlb/fo_signal.hpp"
#include "focrlb/noise_model.hpp"

namespace focrlb {

/// Deterministic per-run random stream.
///
/// The stream for trial k of a batch with master seed s is fully determined
/// by (s, k): a 64-bit state s + (k+1)*0x9E3779B97F4A7C15 is passed through
/// two splitmix64 rounds and seeds a mt19937_64; standard normals come from
/// the Box-Muller transform on 53-bit uniforms. This scheme is part of the
/// output contract and must stay stable across releases.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t run_index);

    /// One standard normal draw.
    double normal();

    /// One uniform draw in [0, 1).
    double uniform01();

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Runs white noise of variance filter.sigma_w2 through the filter recursion
/// and returns the last n_samples outputs, discarding burn_in warm-up samples.
Eigen::VectorXd generate_ambient(const RationalFilter& filter, std::size_t n_samples,
                                 std::size_t burn_in, RngStream& stream);

struct EstimatorOptions {
    std::size_t freq_grid_oversample = 8; ///< coarse grid has ~oversample*N points
    double refine_tol = 1e-10;            ///< golden-section width, cycles/sample
};

/// Whitened nonlinear least-squares FO estimator (the ML estimator for known
/// noise covariance). The coarse stage maximizes the whitened projection of y
/// onto {cos, sin} pairs over a dense frequency grid; golden-section
/// refinement then polishes the frequency on the concentrated objective, and
/// amplitude/phase come from the 2-parameter weighted linear fit at the final
/// frequency.
///
/// Construction whitens the full candidate grid once (O(grid * N^2)), so one
/// estimator should be reused across Monte Carlo trials. The referenced
/// covariance must outlive the estimator.
class FoEstimator {
public:
    FoEstimator(const ToeplitzCovariance& cov, EstimatorOptions options = {});

    struct Fit {
        FoParams params;
        double grid_energy;    ///< concentrated objective at the best grid point
        double refined_energy; ///< objective at the returned frequency (>= grid_energy)
    };

    FoParams estimate(const Eigen::VectorXd& y) const;
    Fit estimate_detailed(const Eigen::VectorXd& y) const;

private:
    struct Projection; // whitened (cos, sin) pair at one frequency

    Projection project(double f) const;

    const ToeplitzCovariance* cov_;
    EstimatorOptions opt_;
    std::vector<double> cand_f_;
    Eigen::MatrixXd wcos_; // N x K whitened cosine regressors
    Eigen::MatrixXd wsin_;
    Eigen::ArrayXd gram_cc_, gram_cs_, gram_ss_, gram_det_;
};

/// One-shot convenience wrapper around FoEstimator.
FoParams estimate_fo(const Eigen::VectorXd& y, const ToeplitzCovariance& cov,
                     const EstimatorOptions& options = {});

struct McConfig {
    std::size_t runs;
    std::uint64_t seed;
    std::size_t n_samples;
    RationalFilter filter;
    FoParams truth;
    std::size_t burn_in;
    EstimatorOptions estimator = {};

    /// Checks runs >= 1, n_samples >= 8 and the burn-in rule
    /// burn_in >= 10 * impulse_energy_length(filter, 0.99).
    void validate() const;
};

struct ParamStats {
    double sample_mean;
    double sample_var;
    double bias;
    double crlb_var;
    double ratio; ///< sample_var / crlb_var
};

struct McResult {
    ParamStats amp;
    ParamStats f0; ///< normalized frequency, cycles/sample
    ParamStats phi;
    std::size_t runs;
    std::size_t failed_runs;
    CrlbBounds bounds; ///< the bound the ratios are measured against
};

/// Executes config.runs independent trials; trial k draws from
/// RngStream(config.seed, k). Phase errors are wrapped to (-pi, pi] before
/// averaging. Per-run estimator failures are counted in failed_runs and never
/// abort the batch. Results are reduced in run order, so they are independent
/// of the worker count.
McResult run_mc(const McConfig& config, unsigned jobs = 1);

} // namespace focrlb
