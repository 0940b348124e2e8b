#include "focrlb/fo_signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace focrlb {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_phase(double phi) {
    if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
    double w = phi - kTwoPi * std::floor((phi + std::numbers::pi) / kTwoPi);
    if (w >= std::numbers::pi) w = -std::numbers::pi; // guard the upper edge
    return w;
}

FoParams::FoParams(double amp, double f0, double phi)
    : amp_(amp), f0_(f0), phi_(wrap_phase(phi)) {
    if (!(amp_ > 0.0)) throw std::invalid_argument("FO amplitude must be > 0");
    if (!(f0_ > 0.0 && f0_ < 0.5))
        throw std::invalid_argument("FO normalized frequency must be in (0, 0.5)");
}

Eigen::VectorXd waveform(const FoParams& p, std::size_t n_samples) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    Eigen::VectorXd q(static_cast<Eigen::Index>(n_samples));
    for (std::size_t n = 0; n < n_samples; ++n)
        q(static_cast<Eigen::Index>(n)) =
            p.amp() * std::cos(kTwoPi * p.f0() * static_cast<double>(n) + p.phi());
    return q;
}

FoJacobian jacobian(const FoParams& p, std::size_t n_samples) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    const auto n_idx = static_cast<Eigen::Index>(n_samples);
    FoJacobian j{Eigen::VectorXd(n_idx), Eigen::VectorXd(n_idx), Eigen::VectorXd(n_idx)};
    for (std::size_t n = 0; n < n_samples; ++n) {
        const double nd = static_cast<double>(n);
        const double psi = kTwoPi * p.f0() * nd + p.phi();
        const double c = std::cos(psi);
        const double s = std::sin(psi);
        const auto i = static_cast<Eigen::Index>(n);
        j.d_amp(i) = c;
        j.d_freq(i) = -p.amp() * kTwoPi * nd * s;
        j.d_phase(i) = -p.amp() * s;
    }
    return j;
}

Eigen::MatrixXd FoJacobian::as_matrix() const {
    Eigen::MatrixXd m(d_amp.size(), 3);
    m.col(0) = d_amp;
    m.col(1) = d_freq;
    m.col(2) = d_phase;
    return m;
}

} // namespace focrlb
