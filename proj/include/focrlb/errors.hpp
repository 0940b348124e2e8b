// Error types shared across the library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace focrlb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a covariance matrix fails the symmetric-positive-definite
/// factorization. Carries the 0-based index of the first non-positive pivot,
/// i.e. the order of the smallest leading principal minor that is not
/// positive.
class NotPositiveDefinite : public Error {
public:
    explicit NotPositiveDefinite(std::size_t leading_minor_index)
        : Error("covariance is not positive definite (leading minor index " +
                std::to_string(leading_minor_index) + ")"),
          index_(leading_minor_index) {}

    std::size_t leading_minor_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Fisher information matrix is singular or indefinite; the CRLB is undefined.
class SingularFisher : public Error {
public:
    using Error::Error;
};

/// Autocovariance grid-doubling error estimate exceeded the requested
/// tolerance. Usually means poles extremely close to the unit circle.
class AutocovarianceTolerance : public Error {
public:
    AutocovarianceTolerance(double achieved, double requested)
        : Error("autocovariance tolerance not met: achieved " +
                std::to_string(achieved) + ", requested " +
                std::to_string(requested)),
          achieved_(achieved),
          requested_(requested) {}

    double achieved_rel_error() const noexcept { return achieved_; }
    double requested_rel_tol() const noexcept { return requested_; }

private:
    double achieved_;
    double requested_;
};

/// The concentrated NLS objective is flat (e.g. all-zero input); no sinusoid
/// can be fit.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// One config-validation failure, addressed by a JSON-style field path.
struct Violation {
    std::string path;
    std::string message;
};

/// Aggregates every violation found while validating a config document.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    ValidationError(std::string path, std::string message)
        : ValidationError(std::vector<Violation>{{std::move(path), std::move(message)}}) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<Violation>& vs) {
        std::string out = "config validation failed:";
        for (const auto& v : vs) out += "\n  " + v.path + ": " + v.message;
        return out;
    }

    std::vector<Violation> violations_;
};

} // namespace focrlb
