// N x N Toeplitz covariance of the ambient noise and its SPD factorization.
#pragma once

#include <cstddef>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "focrlb/errors.hpp"
#include "focrlb/noise_model.hpp"

namespace focrlb {

/// Symmetric Toeplitz covariance C[i][j] = r[|i-j|] of dimension n.
///
/// Construction only checks that enough lags are available; the dense matrix
/// is materialized and Cholesky-factored (C = L L^T) on first use. Positive
/// definiteness is verified at that point and NotPositiveDefinite is thrown
/// with the failing leading-minor index if the check fails. No jitter is ever
/// added: a PD failure indicates an upstream modeling or tolerance problem
/// and must surface.
///
/// The factorization is immutable once built; concurrent solves against one
/// factorization are safe.
class ToeplitzCovariance {
public:
    ToeplitzCovariance(AutocovarianceSeq r, std::size_t n);

    ToeplitzCovariance(const ToeplitzCovariance&) = delete;
    ToeplitzCovariance& operator=(const ToeplitzCovariance&) = delete;

    std::size_t dim() const noexcept { return n_; }
    const AutocovarianceSeq& autocov() const noexcept { return r_; }

    /// Solve C x = rhs against the cached factorization. The matrix overload
    /// solves one column per right-hand side.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

    /// u = L^{-1} y; if y has covariance C then u is white with unit variance.
    Eigen::VectorXd whiten(const Eigen::VectorXd& y) const;
    /// y = L u, the inverse of whiten().
    Eigen::VectorXd unwhiten(const Eigen::VectorXd& u) const;

    /// log det C, available once factored (Gaussian likelihood normalization).
    double log_det() const;

    /// Front-loads the O(n^3) factorization (it otherwise happens on the
    /// first solve). Useful before fanning solves out to worker threads.
    void ensure_factored() const;

    /// Materializes the dense matrix (fresh copy, mostly for tests/tools).
    Eigen::MatrixXd dense() const;

private:
    struct Factor {
        Eigen::MatrixXd l; // lower triangular
        double log_det;
    };

    const Factor& factor() const;

    AutocovarianceSeq r_;
    std::size_t n_;
    mutable std::once_flag once_;
    mutable std::shared_ptr<const Factor> factor_;
};

} // namespace focrlb
