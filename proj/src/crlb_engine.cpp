#include "focrlb/crlb_engine.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace focrlb {

FisherMatrix fisher(const FoParams& p, const ToeplitzCovariance& cov) {
    const Eigen::MatrixXd j = jacobian(p, cov.dim()).as_matrix();
    const Eigen::MatrixXd z = cov.solve(j);
    Eigen::Matrix3d m = j.transpose() * z;
    m = 0.5 * (m + m.transpose()).eval();
    return {m};
}

CrlbBounds crlb(const FisherMatrix& fim, double fs_hz) {
    if (!(fs_hz > 0.0)) throw std::invalid_argument("fs_hz must be > 0");
    const Eigen::Matrix3d& m = fim.m;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eigen(m);
    const Eigen::Vector3d evals = eigen.eigenvalues(); // ascending
    if (!(evals(0) > 0.0))
        throw SingularFisher("Fisher information matrix is not positive definite "
                             "(min eigenvalue " + std::to_string(evals(0)) + ")");
    const double det = m.determinant();
    if (!(det > 1e-300))
        throw SingularFisher("Fisher information matrix determinant is not positive");

    // adjugate diagonal over determinant, cross-checked against a full-pivot
    // solve; the pivoted route wins on disagreement
    Eigen::Vector3d var;
    var(0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
    var(1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
    var(2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;

    const Eigen::Vector3d pivoted = m.fullPivLu().inverse().diagonal();
    for (int i = 0; i < 3; ++i) {
        const double scale = std::max({std::abs(var(i)), std::abs(pivoted(i)), 1e-300});
        if (std::abs(var(i) - pivoted(i)) / scale > 1e-6) var(i) = pivoted(i);
    }
    if (!(var(0) > 0.0 && var(1) > 0.0 && var(2) > 0.0))
        throw SingularFisher("inverse Fisher information has a non-positive diagonal");

    CrlbBounds out{};
    out.var_amp = var(0);
    out.var_f0 = var(1);
    out.var_phi = var(2);
    out.std_amp = std::sqrt(out.var_amp);
    out.std_f0 = std::sqrt(out.var_f0);
    out.std_phi = std::sqrt(out.var_phi);
    out.std_freq_hz = fs_hz * out.std_f0;
    out.condition_estimate = evals(2) / evals(0);
    out.ill_conditioned = out.condition_estimate > 1e12;
    return out;
}

CrlbBounds white_noise_asymptotic(double amp, double sigma2, std::size_t n_samples) {
    if (!(amp > 0.0)) throw std::invalid_argument("amplitude must be > 0");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    if (n_samples < 64)
        throw std::invalid_argument("asymptotic forms need n_samples >= 64");

    const double n = static_cast<double>(n_samples);
    const double snr = amp * amp / (2.0 * sigma2);
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;

    CrlbBounds out{};
    out.var_amp = 2.0 * sigma2 / n;
    out.var_f0 = 12.0 / (four_pi2 * snr * n * (n * n - 1.0));
    out.var_phi = 2.0 * (2.0 * n - 1.0) / (snr * n * (n + 1.0));
    out.std_amp = std::sqrt(out.var_amp);
    out.std_f0 = std::sqrt(out.var_f0);
    out.std_phi = std::sqrt(out.var_phi);
    out.std_freq_hz = out.std_f0; // normalized units
    out.condition_estimate = std::numeric_limits<double>::quiet_NaN();
    out.ill_conditioned = false;
    return out;
}

} // namespace focrlb
