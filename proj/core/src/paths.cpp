#include "roughpath/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughpath/linalg.hpp"

namespace roughpath {

PiecewisePath::PiecewisePath(std::vector<double> t, std::vector<std::vector<double>> v)
    : times(std::move(t)), values(std::move(v)) {
    if (times.size() < 2) throw std::invalid_argument("PiecewisePath: need >= 2 samples");
    if (times.size() != values.size())
        throw std::invalid_argument("PiecewisePath: times/values size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("PiecewisePath: times must be strictly increasing");
    const std::size_t d = values.front().size();
    if (d == 0) throw std::invalid_argument("PiecewisePath: zero-dimensional values");
    for (const auto& x : values)
        if (x.size() != d) throw std::invalid_argument("PiecewisePath: inconsistent value dimension");
}

int PiecewisePath::dim() const {
    if (values.empty()) return 0;
    return static_cast<int>(values.front().size());
}

std::vector<double> PiecewisePath::value_at(double t) const {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const std::size_t i = j - 1;
    const double theta = (t - times[i]) / (times[j] - times[i]);
    std::vector<double> out(values[i].size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = values[i][k] + theta * (values[j][k] - values[i][k]);
    return out;
}

std::vector<double> PiecewisePath::increment(std::size_t i, std::size_t j) const {
    if (i >= values.size() || j >= values.size())
        throw std::out_of_range("PiecewisePath::increment: index out of range");
    return vec_sub(values[j], values[i]);
}

double empirical_holder_exponent(const PiecewisePath& path) {
    const std::size_t n = path.size();
    const double horizon = path.times.back() - path.times.front();
    std::vector<double> log_scale, log_osc;
    for (std::size_t lag = 1; 2 * lag <= n - 1; lag *= 2) {
        double m = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i)
            m = std::max(m, norm2(path.increment(i, i + lag)));
        if (m > 0.0) {
            const double scale = horizon * static_cast<double>(lag) / static_cast<double>(n - 1);
            log_scale.push_back(std::log(scale));
            log_osc.push_back(std::log(m));
        }
    }
    if (log_scale.size() < 2) return std::numeric_limits<double>::infinity();
    return fit_line_slope(log_scale, log_osc);
}

}  // namespace roughpath
