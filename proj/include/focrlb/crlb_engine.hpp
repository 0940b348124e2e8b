// Fisher information matrix for the FO parameters under colored Gaussian
// noise, and the resulting CRLB variance/STD bounds.
#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "focrlb/covariance.hpp"
#include "focrlb/fo_signal.hpp"

namespace focrlb {

/// 3x3 symmetric Fisher information matrix, entry order [A, f0, phi].
struct FisherMatrix {
    Eigen::Matrix3d m;
};

/// Lower bounds on estimator variance/STD per parameter. Frequency is carried
/// both in normalized units (var_f0, std_f0, cycles/sample) and in Hz
/// (std_freq_hz = fs_hz * std_f0).
struct CrlbBounds {
    double var_amp;
    double var_f0;
    double var_phi;
    double std_amp;
    double std_f0;
    double std_phi;
    double std_freq_hz;
    double condition_estimate; ///< lambda_max / lambda_min of the FIM
    bool ill_conditioned;      ///< condition_estimate > 1e12
};

/// [I]_ij = (dq/dtheta_i)^T C^{-1} (dq/dtheta_j): three solves against one
/// factorization, symmetrized as (M + M^T)/2. Propagates NotPositiveDefinite.
FisherMatrix fisher(const FoParams& p, const ToeplitzCovariance& cov);

/// Diagonal of the inverse FIM. The 3x3 inverse is formed by closed-form
/// adjugate over determinant and cross-checked against a full-pivot solve;
/// the pivoted result wins if the two disagree. Throws SingularFisher when
/// the determinant is not positive (tolerance 1e-300) or an eigenvalue is
/// non-positive. Sets ill_conditioned (a warning, not an error) when the
/// eigenvalue ratio exceeds 1e12.
CrlbBounds crlb(const FisherMatrix& fim, double fs_hz);

/// Classical closed-form bounds for a single real sinusoid in white noise of
/// variance sigma2 (with SNR = A^2/(2 sigma2)):
///   var_amp = 2 sigma2 / N
///   var_f0  = 12 / ((2 pi)^2 SNR N (N^2-1))
///   var_phi = 2 (2N-1) / (SNR N (N+1))
/// Valid for N >= 64 (enforced) where cross terms are negligible. Frequency
/// is reported in normalized units (std_freq_hz = std_f0); the FIM condition
/// estimate is not applicable and is NaN.
CrlbBounds white_noise_asymptotic(double amp, double sigma2, std::size_t n_samples);

} // namespace focrlb
