#include "focrlb/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace focrlb {

ToeplitzCovariance::ToeplitzCovariance(AutocovarianceSeq r, std::size_t n)
    : r_(std::move(r)), n_(n) {
    if (n_ < 1) throw std::invalid_argument("covariance dimension must be >= 1");
    if (r_.max_lag() < n_ - 1)
        throw std::invalid_argument("autocovariance has " + std::to_string(r_.max_lag()) +
                                    " lags, need " + std::to_string(n_ - 1));
}

Eigen::MatrixXd ToeplitzCovariance::dense() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            c(i, j) = r_[static_cast<std::size_t>(std::abs(i - j))];
    return c;
}

const ToeplitzCovariance::Factor& ToeplitzCovariance::factor() const {
    std::call_once(once_, [this] {
        const auto n = static_cast<Eigen::Index>(n_);
        Eigen::MatrixXd l = dense();
        // left-looking Cholesky on the lower triangle; the failing pivot
        // index identifies the offending leading principal minor
        double log_det = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j > 0)
                l.col(j).tail(n - j).noalias() -=
                    l.block(j, 0, n - j, j) * l.row(j).head(j).transpose();
            const double pivot = l(j, j);
            if (!(pivot > 0.0) || !std::isfinite(pivot))
                throw NotPositiveDefinite(static_cast<std::size_t>(j));
            const double s = std::sqrt(pivot);
            l(j, j) = s;
            if (j + 1 < n) l.col(j).tail(n - j - 1) /= s;
            log_det += 2.0 * std::log(s);
        }
        l.triangularView<Eigen::StrictlyUpper>().setZero();
        factor_ = std::make_shared<const Factor>(Factor{std::move(l), log_det});
    });
    return *factor_;
}

void ToeplitzCovariance::ensure_factored() const { factor(); }

Eigen::VectorXd ToeplitzCovariance::solve(const Eigen::VectorXd& rhs) const {
    const Factor& f = factor();
    if (rhs.size() != f.l.rows()) throw std::invalid_argument("rhs length mismatch");
    Eigen::VectorXd x = f.l.triangularView<Eigen::Lower>().solve(rhs);
    f.l.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
    return x;
}

Eigen::MatrixXd ToeplitzCovariance::solve(const Eigen::MatrixXd& rhs) const {
    const Factor& f = factor();
    if (rhs.rows() != f.l.rows()) throw std::invalid_argument("rhs length mismatch");
    Eigen::MatrixXd x = f.l.triangularView<Eigen::Lower>().solve(rhs);
    f.l.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
    return x;
}

Eigen::VectorXd ToeplitzCovariance::whiten(const Eigen::VectorXd& y) const {
    const Factor& f = factor();
    if (y.size() != f.l.rows()) throw std::invalid_argument("vector length mismatch");
    return f.l.triangularView<Eigen::Lower>().solve(y);
}

Eigen::VectorXd ToeplitzCovariance::unwhiten(const Eigen::VectorXd& u) const {
    const Factor& f = factor();
    if (u.size() != f.l.rows()) throw std::invalid_argument("vector length mismatch");
    return f.l.triangularView<Eigen::Lower>() * u;
}

double ToeplitzCovariance::log_det() const { return factor().log_det; }

} // namespace focrlb
