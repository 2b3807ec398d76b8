#pragma once

#include <cstddef>
#include <vector>

namespace roughpath {

/// Sampled path in R^dim with piecewise-linear interpolation between samples.
struct PiecewisePath {
    std::vector<double> times;                 // strictly increasing, size >= 2
    std::vector<std::vector<double>> values;   // one R^dim value per time

    PiecewisePath() = default;
    PiecewisePath(std::vector<double> t, std::vector<std::vector<double>> v);

    int dim() const;
    std::size_t size() const { return times.size(); }

    /// Piecewise-linear value; clamps t to [times.front(), times.back()].
    std::vector<double> value_at(double t) const;

    /// x(times[j]) - x(times[i]).
    std::vector<double> increment(std::size_t i, std::size_t j) const;
};

/// Least-squares slope of log(max-increment) against log(lag) over dyadic
/// index lags; the usual diagnostic for an empirical Holder exponent.
/// Returns +infinity for constant paths.
double empirical_holder_exponent(const PiecewisePath& path);

}  // namespace roughpath
