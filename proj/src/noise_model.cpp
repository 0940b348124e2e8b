#include "focrlb/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace focrlb {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> eval_poly(const std::vector<double>& coeffs, double f) {
    // sum_k c[k] z^-k at z = e^{j 2 pi f}
    const std::complex<double> zinv = std::polar(1.0, -kTwoPi * f);
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * zinv + *it;
    return acc;
}

double magnitude_sq_ratio(const RationalFilter& filter, double f) {
    const double nb = std::norm(eval_poly(filter.num(), f));
    const double na = std::norm(eval_poly(filter.den(), f));
    return nb / na;
}

double psd_unchecked(const RationalFilter& filter, double f) {
    return filter.sigma_w2() * magnitude_sq_ratio(filter, f);
}

// Largest pole modulus of 1 + a1 z^-1 + ... + aQ z^-Q, via the companion
// matrix of z^Q + a1 z^{Q-1} + ... + aQ.
double max_pole_modulus(const std::vector<double>& den) {
    const std::size_t q = den.size() - 1;
    if (q == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q),
                                                      static_cast<Eigen::Index>(q));
    for (std::size_t i = 1; i < q; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < q; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q - 1)) =
            -den[q - i];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    double max_mod = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        max_mod = std::max(max_mod, std::abs(solver.eigenvalues()(i)));
    return max_mod;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// In-place iterative radix-2 FFT, size must be a power of two.
void fft(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const std::complex<double> wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// r[k] = (1/M) sum_m S(m/M) cos(2 pi m k / M), k = 0..max_lag. The PSD of a
// real filter is even, so the DFT real part is the aliased autocovariance.
std::vector<double> autocov_on_grid(const RationalFilter& filter, std::size_t m,
                                    std::size_t max_lag) {
    std::vector<std::complex<double>> spec(m);
    for (std::size_t i = 0; i < m; ++i)
        spec[i] = psd_unchecked(filter, static_cast<double>(i) / static_cast<double>(m));
    fft(spec);
    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k)
        r[k] = spec[k].real() / static_cast<double>(m);
    return r;
}

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

} // namespace

RationalFilter::RationalFilter(std::vector<double> num, std::vector<double> den,
                               double sigma_w2, double fs_hz)
    : num_(std::move(num)), den_(std::move(den)), sigma_w2_(sigma_w2), fs_hz_(fs_hz) {
    if (num_.empty()) throw std::invalid_argument("filter numerator is empty");
    if (den_.empty()) throw std::invalid_argument("filter denominator is empty");
    if (den_[0] != 1.0) throw std::invalid_argument("filter denominator must have a[0] == 1");
    if (!(sigma_w2_ > 0.0)) throw std::invalid_argument("sigma_w2 must be > 0");
    if (!(fs_hz_ > 0.0)) throw std::invalid_argument("fs_hz must be > 0");
    const double pole = max_pole_modulus(den_);
    if (!(pole < 1.0))
        throw std::invalid_argument("filter is unstable: pole modulus " +
                                    std::to_string(pole));
}

ModalSpec default_surrogate_modes() {
    return ModalSpec{{{0.25, 0.05, 1.0}, {0.6, 0.08, 0.3}, {0.7, 0.08, 0.3}}};
}

RationalFilter build_surrogate(const ModalSpec& spec, double sigma_w2, double fs_hz) {
    if (!(fs_hz > 0.0)) throw std::invalid_argument("fs_hz must be > 0");
    if (spec.modes.empty()) throw std::invalid_argument("modal spec has no modes");
    const double nyquist = fs_hz / 2.0;
    for (const Mode& mode : spec.modes) {
        if (!(mode.freq_hz > 0.0 && mode.freq_hz < nyquist))
            throw std::invalid_argument("mode frequency must be in (0, fs/2)");
        if (!(mode.damping_ratio > 0.0 && mode.damping_ratio < 1.0))
            throw std::invalid_argument("damping ratio must be in (0, 1)");
        if (!(mode.gain >= 0.0)) throw std::invalid_argument("mode gain must be >= 0");
    }

    const double t = 1.0 / fs_hz;
    std::vector<std::vector<double>> section_den;
    std::vector<double> section_gain;
    for (const Mode& mode : spec.modes) {
        const double radius = std::exp(-mode.damping_ratio * kTwoPi * mode.freq_hz * t);
        const double angle =
            kTwoPi * mode.freq_hz * std::sqrt(1.0 - mode.damping_ratio * mode.damping_ratio) * t;
        section_den.push_back({1.0, -2.0 * radius * std::cos(angle), radius * radius});
        section_gain.push_back(mode.gain * (1.0 - radius));
    }

    std::vector<double> den{1.0};
    for (const auto& d : section_den) den = poly_mul(den, d);

    // numerator: sum_m gain_m * prod_{k != m} den_k
    std::vector<double> num(den.size() > 2 ? den.size() - 2 : 1, 0.0);
    for (std::size_t i = 0; i < section_den.size(); ++i) {
        std::vector<double> term{section_gain[i]};
        for (std::size_t j = 0; j < section_den.size(); ++j)
            if (j != i) term = poly_mul(term, section_den[j]);
        if (term.size() > num.size()) num.resize(term.size(), 0.0);
        for (std::size_t k = 0; k < term.size(); ++k) num[k] += term[k];
    }

    return RationalFilter(std::move(num), std::move(den), sigma_w2, fs_hz);
}

double psd(const RationalFilter& filter, double f) {
    if (!(f >= 0.0 && f <= 0.5))
        throw std::invalid_argument("normalized frequency must be in [0, 0.5]");
    return psd_unchecked(filter, f);
}

std::vector<double> psd(const RationalFilter& filter, std::span<const double> f_grid) {
    std::vector<double> out;
    out.reserve(f_grid.size());
    for (double f : f_grid) out.push_back(psd(filter, f));
    return out;
}

PolarGain frequency_response(const RationalFilter& filter, double f0) {
    if (!(f0 >= 0.0 && f0 <= 0.5))
        throw std::invalid_argument("normalized frequency must be in [0, 0.5]");
    const std::complex<double> h = eval_poly(filter.num(), f0) / eval_poly(filter.den(), f0);
    return {std::abs(h), std::arg(h)};
}

AutocovarianceSeq::AutocovarianceSeq(std::vector<double> r) : r_(std::move(r)) {
    if (r_.empty()) throw std::invalid_argument("autocovariance sequence is empty");
    if (!(r_[0] > 0.0)) throw std::invalid_argument("autocovariance r[0] must be > 0");
    for (std::size_t k = 1; k < r_.size(); ++k)
        if (!(std::abs(r_[k]) <= r_[0]))
            throw std::invalid_argument("autocovariance |r[" + std::to_string(k) +
                                        "]| exceeds r[0]");
}

AutocovarianceSeq autocovariance(const RationalFilter& filter, std::size_t max_lag,
                                 double rel_tol) {
    if (max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
    const std::size_t m = next_pow2(std::max<std::size_t>(8 * max_lag, 4096));
    const std::vector<double> coarse = autocov_on_grid(filter, m, max_lag);
    std::vector<double> fine = autocov_on_grid(filter, 2 * m, max_lag);

    double err = 0.0;
    for (std::size_t k = 0; k <= max_lag; ++k)
        err = std::max(err, std::abs(coarse[k] - fine[k]));
    if (!(fine[0] > 0.0)) throw std::invalid_argument("autocovariance r[0] must be > 0");
    err /= fine[0];
    if (!(err <= rel_tol)) throw AutocovarianceTolerance(err, rel_tol);

    // |r[k]| <= r[0] can be violated by roundoff at the last few bits; clamp.
    for (std::size_t k = 1; k <= max_lag; ++k)
        fine[k] = std::clamp(fine[k], -fine[0], fine[0]);
    return AutocovarianceSeq(std::move(fine));
}

std::size_t impulse_energy_length(const RationalFilter& filter, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("fraction must be in (0, 1)");
    // total impulse-response energy: r[0] = sigma_w2 * sum h^2
    const double total = autocovariance(filter, 1).values()[0] / filter.sigma_w2();

    const auto& b = filter.num();
    const auto& a = filter.den();
    std::vector<double> h_hist(a.size(), 0.0); // h[n-1], h[n-2], ...
    double cumulative = 0.0;
    constexpr std::size_t kMaxLen = 1u << 24;
    for (std::size_t n = 0; n < kMaxLen; ++n) {
        double h = n < b.size() ? b[n] : 0.0;
        for (std::size_t k = 1; k < a.size(); ++k)
            if (n >= k) h -= a[k] * h_hist[k - 1];
        for (std::size_t k = a.size() - 1; k >= 1; --k) h_hist[k] = h_hist[k - 1];
        if (!h_hist.empty()) h_hist[0] = h;
        cumulative += h * h;
        if (cumulative >= fraction * total) return n;
    }
    throw Error("impulse response energy did not reach the requested fraction");
}

} // namespace focrlb
