#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace isvp {

/// A computation would exceed a configured size limit.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative eigensolver failed to reach tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Time integration lost unitarity beyond the configured bound.
class IntegratorError : public std::runtime_error {
public:
    IntegratorError(const std::string& what, double norm_drift)
        : std::runtime_error(what), norm_drift_(norm_drift) {}
    double norm_drift() const { return norm_drift_; }

private:
    double norm_drift_;
};

/// Hardware graph cannot host the requested embedding.
class SizingError : public std::runtime_error {
public:
    SizingError(const std::string& what, int minimal_grid)
        : std::runtime_error(what), minimal_grid_(minimal_grid) {}
    int minimal_grid() const { return minimal_grid_; }

private:
    int minimal_grid_;
};

}  // namespace isvp
