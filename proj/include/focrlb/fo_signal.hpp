// Forced-oscillation signal model q[n] = A cos(2 pi f0 n + phi) and its
// parameter Jacobian.
#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace focrlb {

/// Wrap an angle to [-pi, pi).
double wrap_phase(double phi);

/// FO parameter triple theta = [A, f0, phi]: amplitude (> 0), normalized
/// frequency in cycles/sample restricted to the open interval (0, 0.5) to
/// keep the estimation problem identifiable, and phase wrapped to [-pi, pi).
class FoParams {
public:
    FoParams(double amp, double f0, double phi);

    double amp() const noexcept { return amp_; }
    double f0() const noexcept { return f0_; }
    double phi() const noexcept { return phi_; }

private:
    double amp_;
    double f0_;
    double phi_;
};

/// q[n] = A cos(2 pi f0 n + phi), n = 0..n_samples-1.
Eigen::VectorXd waveform(const FoParams& p, std::size_t n_samples);

/// Columns of dq/dtheta in the order [A, f0, phi]:
///   d_amp[n]   =  cos(2 pi f0 n + phi)
///   d_freq[n]  = -A 2 pi n sin(2 pi f0 n + phi)   (so d_freq[0] == 0)
///   d_phase[n] = -A sin(2 pi f0 n + phi)
struct FoJacobian {
    Eigen::VectorXd d_amp;
    Eigen::VectorXd d_freq;
    Eigen::VectorXd d_phase;

    Eigen::MatrixXd as_matrix() const;
};

FoJacobian jacobian(const FoParams& p, std::size_t n_samples);

} // namespace focrlb
