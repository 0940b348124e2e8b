// Ambient-noise model: a white-noise-driven rational filter, its PSD,
// autocovariance and frequency response.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "focrlb/errors.hpp"

namespace focrlb {

/// One resonant mode of the ambient-noise surrogate.
struct Mode {
    double freq_hz;
    double damping_ratio; ///< zeta in (0, 1)
    double gain;          ///< unitless, >= 0
};

struct ModalSpec {
    std::vector<Mode> modes;
};

/// Discrete-time rational filter B(z^-1)/A(z^-1) driven by zero-mean white
/// noise of variance sigma_w2, sampled at fs_hz. Coefficients are in
/// ascending powers of z^-1 with den[0] == 1. All denominator roots must lie
/// strictly inside the unit circle; this is checked at construction.
class RationalFilter {
public:
    RationalFilter(std::vector<double> num, std::vector<double> den,
                   double sigma_w2, double fs_hz);

    const std::vector<double>& num() const noexcept { return num_; }
    const std::vector<double>& den() const noexcept { return den_; }
    double sigma_w2() const noexcept { return sigma_w2_; }
    double fs_hz() const noexcept { return fs_hz_; }

private:
    std::vector<double> num_;
    std::vector<double> den_;
    double sigma_w2_;
    double fs_hz_;
};

/// Parallel bank of second-order digital resonators, one per mode, combined
/// over a common denominator. Mode m places conjugate poles at radius
/// exp(-zeta*2*pi*f*T) and angle 2*pi*f*sqrt(1-zeta^2)*T (T = 1/fs_hz); its
/// section numerator is gain*(1-radius).
RationalFilter build_surrogate(const ModalSpec& spec, double sigma_w2, double fs_hz);

/// Three-mode default standing in for a reduced-order interconnection model:
/// 0.25/0.6/0.7 Hz, damping 0.05/0.08/0.08, gains 1.0/0.3/0.3.
ModalSpec default_surrogate_modes();

/// Two-sided PSD at normalized frequency f in [0, 0.5]:
/// S_v(f) = sigma_w2 * |B(e^{j2pif})|^2 / |A(e^{j2pif})|^2.
double psd(const RationalFilter& filter, double f);
std::vector<double> psd(const RationalFilter& filter, std::span<const double> f_grid);

struct PolarGain {
    double magnitude;
    double phase_rad;
};

/// Complex gain B/A at e^{j2pif0}, f0 in [0, 0.5], in polar form.
PolarGain frequency_response(const RationalFilter& filter, double f0);

/// Autocovariance sequence r[0..L] with r[k] = E{v[n]v[n+k]}.
class AutocovarianceSeq {
public:
    explicit AutocovarianceSeq(std::vector<double> r);

    double operator[](std::size_t k) const { return r_[k]; }
    std::size_t max_lag() const noexcept { return r_.size() - 1; }
    const std::vector<double>& values() const noexcept { return r_; }

private:
    std::vector<double> r_;
};

/// Autocovariance of the filter output for lags 0..max_lag, computed by
/// inverse DFT of the PSD sampled on an M-point grid of the full circle,
/// M = smallest power of two >= max(8*max_lag, 4096). The result is accepted
/// only if one grid-doubling check, max_k |r_M[k] - r_2M[k]| / r[0], is
/// within rel_tol; otherwise AutocovarianceTolerance is thrown.
AutocovarianceSeq autocovariance(const RationalFilter& filter, std::size_t max_lag,
                                 double rel_tol = 1e-8);

/// Smallest m such that the impulse response h[0..m] holds at least
/// `fraction` of the total impulse-response energy.
std::size_t impulse_energy_length(const RationalFilter& filter, double fraction = 0.99);

} // namespace focrlb
