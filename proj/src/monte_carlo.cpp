#include "focrlb/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "focrlb/parallel.hpp"

namespace focrlb {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// phase error wrapped to (-pi, pi]
double wrap_error(double e) {
    double w = e - kTwoPi * std::floor((e + std::numbers::pi) / kTwoPi);
    if (w <= -std::numbers::pi) w += kTwoPi;
    if (w > std::numbers::pi) w -= kTwoPi;
    return w;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t run_index) {
    const std::uint64_t mixed =
        splitmix64(splitmix64(seed + (run_index + 1) * 0x9E3779B97F4A7C15ull));
    gen_.seed(mixed);
}

double RngStream::uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 in (0, 1] so the log is finite
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Eigen::VectorXd generate_ambient(const RationalFilter& filter, std::size_t n_samples,
                                 std::size_t burn_in, RngStream& stream) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    const auto& b = filter.num();
    const auto& a = filter.den();
    const double scale = std::sqrt(filter.sigma_w2());
    const std::size_t total = burn_in + n_samples;

    std::vector<double> w(total);
    for (auto& x : w) x = scale * stream.normal();

    Eigen::VectorXd v(static_cast<Eigen::Index>(n_samples));
    std::vector<double> v_hist(a.size(), 0.0); // v[n-1], v[n-2], ...
    for (std::size_t n = 0; n < total; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k)
            if (n >= k) acc += b[k] * w[n - k];
        for (std::size_t k = 1; k < a.size(); ++k) acc -= a[k] * v_hist[k - 1];
        for (std::size_t k = a.size() - 1; k >= 1; --k) v_hist[k] = v_hist[k - 1];
        if (!v_hist.empty()) v_hist[0] = acc;
        if (n >= burn_in) v(static_cast<Eigen::Index>(n - burn_in)) = acc;
    }
    return v;
}

struct FoEstimator::Projection {
    Eigen::VectorXd wc;
    Eigen::VectorXd ws;
    double cc, cs, ss, det;
};

FoEstimator::Projection FoEstimator::project(double f) const {
    const auto n = static_cast<Eigen::Index>(cov_->dim());
    Eigen::VectorXd c(n), s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double arg = kTwoPi * f * static_cast<double>(i);
        c(i) = std::cos(arg);
        s(i) = std::sin(arg);
    }
    Projection p;
    p.wc = cov_->whiten(c);
    p.ws = cov_->whiten(s);
    p.cc = p.wc.squaredNorm();
    p.cs = p.wc.dot(p.ws);
    p.ss = p.ws.squaredNorm();
    p.det = p.cc * p.ss - p.cs * p.cs;
    return p;
}

FoEstimator::FoEstimator(const ToeplitzCovariance& cov, EstimatorOptions options)
    : cov_(&cov), opt_(options) {
    if (opt_.freq_grid_oversample < 1)
        throw std::invalid_argument("freq_grid_oversample must be >= 1");
    if (!(opt_.refine_tol > 0.0)) throw std::invalid_argument("refine_tol must be > 0");
    cov.ensure_factored();

    const std::size_t n = cov.dim();
    const std::size_t m = 2 * opt_.freq_grid_oversample * n;
    cand_f_.reserve(m / 2);
    for (std::size_t k = 1; k < m / 2; ++k)
        cand_f_.push_back(static_cast<double>(k) / static_cast<double>(m));

    const auto n_idx = static_cast<Eigen::Index>(n);
    const auto k_idx = static_cast<Eigen::Index>(cand_f_.size());
    wcos_.resize(n_idx, k_idx);
    wsin_.resize(n_idx, k_idx);
    gram_cc_.resize(k_idx);
    gram_cs_.resize(k_idx);
    gram_ss_.resize(k_idx);
    gram_det_.resize(k_idx);
    for (Eigen::Index k = 0; k < k_idx; ++k) {
        const Projection p = project(cand_f_[static_cast<std::size_t>(k)]);
        wcos_.col(k) = p.wc;
        wsin_.col(k) = p.ws;
        gram_cc_(k) = p.cc;
        gram_cs_(k) = p.cs;
        gram_ss_(k) = p.ss;
        gram_det_(k) = p.det;
    }
}

FoParams FoEstimator::estimate(const Eigen::VectorXd& y) const {
    return estimate_detailed(y).params;
}

FoEstimator::Fit FoEstimator::estimate_detailed(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd u = cov_->whiten(y);

    // concentrated objective on the grid: energy of u explained by the
    // whitened {cos, sin} pair at each candidate frequency
    const Eigen::ArrayXd bc = (wcos_.transpose() * u).array();
    const Eigen::ArrayXd bs = (wsin_.transpose() * u).array();
    const Eigen::ArrayXd energy =
        (gram_ss_ * bc.square() - 2.0 * gram_cs_ * bc * bs + gram_cc_ * bs.square()) /
        gram_det_;

    Eigen::Index best = 0;
    const double grid_energy = energy.maxCoeff(&best);
    if (!(grid_energy > 0.0) || !std::isfinite(grid_energy))
        throw DegenerateFit("concentrated objective is flat");

    const std::size_t bi = static_cast<std::size_t>(best);
    double lo = bi > 0 ? cand_f_[bi - 1] : cand_f_[bi] * 0.5;
    double hi = bi + 1 < cand_f_.size() ? cand_f_[bi + 1] : 0.5 * (cand_f_[bi] + 0.5);

    const auto objective = [&](double f) { // fresh whitening off the grid
        const Projection p = project(f);
        const double pc = p.wc.dot(u);
        const double ps = p.ws.dot(u);
        return (p.ss * pc * pc - 2.0 * p.cs * pc * ps + p.cc * ps * ps) / p.det;
    };

    // golden-section maximization of the concentrated objective
    constexpr double kGolden = 0.6180339887498949;
    double c = hi - kGolden * (hi - lo);
    double d = lo + kGolden * (hi - lo);
    double fc = objective(c);
    double fd = objective(d);
    while (hi - lo > opt_.refine_tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kGolden * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kGolden * (hi - lo);
            fd = objective(d);
        }
    }
    double f_hat = 0.5 * (lo + hi);
    double refined_energy = objective(f_hat);
    if (refined_energy < grid_energy) { // refinement must never lose to the grid
        f_hat = cand_f_[bi];
        refined_energy = grid_energy;
    }

    const Projection p = project(f_hat);
    const double pc = p.wc.dot(u);
    const double ps = p.ws.dot(u);
    const double alpha = (p.ss * pc - p.cs * ps) / p.det;
    const double beta = (p.cc * ps - p.cs * pc) / p.det;
    const double amp = std::hypot(alpha, beta);
    if (!(amp > 0.0) || !std::isfinite(amp))
        throw DegenerateFit("amplitude fit collapsed to zero");
    const double phi = std::atan2(-beta, alpha);

    return Fit{FoParams(amp, f_hat, phi), grid_energy, refined_energy};
}

FoParams estimate_fo(const Eigen::VectorXd& y, const ToeplitzCovariance& cov,
                     const EstimatorOptions& options) {
    return FoEstimator(cov, options).estimate(y);
}

void McConfig::validate() const {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (n_samples < 8) throw std::invalid_argument("n_samples must be >= 8");
    const std::size_t energy_len = impulse_energy_length(filter, 0.99);
    if (burn_in < 10 * energy_len)
        throw std::invalid_argument(
            "burn_in " + std::to_string(burn_in) + " is below 10x the 99%-energy "
            "impulse length (" + std::to_string(energy_len) + " samples)");
}

McResult run_mc(const McConfig& config, unsigned jobs) {
    config.validate();

    const AutocovarianceSeq r = autocovariance(config.filter, config.n_samples - 1);
    const ToeplitzCovariance cov(r, config.n_samples);
    cov.ensure_factored();

    const CrlbBounds bounds = crlb(fisher(config.truth, cov), config.filter.fs_hz());
    const FoEstimator estimator(cov, config.estimator);
    const Eigen::VectorXd q = waveform(config.truth, config.n_samples);

    struct RunOutcome {
        double amp_err, f0_err, phi_err;
        bool ok;
    };
    std::vector<RunOutcome> outcomes(config.runs);
    parallel_for(config.runs, jobs, [&](std::size_t i) {
        RngStream stream(config.seed, i);
        const Eigen::VectorXd y =
            q + generate_ambient(config.filter, config.n_samples, config.burn_in, stream);
        try {
            const FoParams est = estimator.estimate(y);
            outcomes[i] = {est.amp() - config.truth.amp(), est.f0() - config.truth.f0(),
                           wrap_error(est.phi() - config.truth.phi()), true};
        } catch (const Error&) {
            outcomes[i] = {0.0, 0.0, 0.0, false};
        }
    });

    // fixed-order reduction so the result is independent of the worker count
    std::size_t ok_count = 0;
    double mean[3] = {0.0, 0.0, 0.0};
    for (const auto& o : outcomes) {
        if (!o.ok) continue;
        ++ok_count;
        mean[0] += o.amp_err;
        mean[1] += o.f0_err;
        mean[2] += o.phi_err;
    }
    const std::size_t failed = config.runs - ok_count;
    if (ok_count > 0)
        for (double& m : mean) m /= static_cast<double>(ok_count);

    double var[3] = {0.0, 0.0, 0.0};
    for (const auto& o : outcomes) {
        if (!o.ok) continue;
        const double d[3] = {o.amp_err - mean[0], o.f0_err - mean[1], o.phi_err - mean[2]};
        for (int p = 0; p < 3; ++p) var[p] += d[p] * d[p];
    }
    if (ok_count > 1)
        for (double& v : var) v /= static_cast<double>(ok_count - 1);

    const double truth[3] = {config.truth.amp(), config.truth.f0(), config.truth.phi()};
    const double crlb_var[3] = {bounds.var_amp, bounds.var_f0, bounds.var_phi};
    ParamStats stats[3];
    for (int p = 0; p < 3; ++p)
        stats[p] = ParamStats{truth[p] + mean[p], var[p], mean[p], crlb_var[p],
                              var[p] / crlb_var[p]};

    return McResult{stats[0], stats[1], stats[2], config.runs, failed, bounds};
}

} // namespace focrlb
