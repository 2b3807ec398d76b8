#include "roughpath/sewing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "roughpath/linalg.hpp"
#include "roughpath/warnings.hpp"

namespace roughpath {

namespace {

std::vector<double> riemann_sum(const AlmostAdditiveFunctional& mu, double s, double t, int depth) {
    const std::size_t pieces = std::size_t{1} << depth;
    std::vector<double> first = mu.evaluator(s, s + (t - s) / static_cast<double>(pieces));
    CompensatedVecSum acc(first.size());
    acc.add(first);
    for (std::size_t i = 1; i < pieces; ++i) {
        const double u = s + (t - s) * static_cast<double>(i) / static_cast<double>(pieces);
        const double v = s + (t - s) * static_cast<double>(i + 1) / static_cast<double>(pieces);
        acc.add(mu.evaluator(u, v));
    }
    return acc.sum;
}

}  // namespace

SewResult sew(const AlmostAdditiveFunctional& mu, double s, double t, double tol, int max_depth) {
    if (!mu.evaluator) throw std::invalid_argument("sew: missing evaluator");
    if (!(t > s)) throw std::invalid_argument("sew: need t > s");
    if (!(tol > 0.0)) throw std::invalid_argument("sew: tol must be positive");
    if (max_depth < 1) throw std::invalid_argument("sew: max_depth must be >= 1");

    SewResult out;
    std::vector<double> prev = mu.evaluator(s, t);
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<double> cur = riemann_sum(mu, s, t, depth);
        if (cur.size() != prev.size())
            throw std::invalid_argument("sew: evaluator returned inconsistent sizes");
        const double delta = sup_gap(cur, prev);
        out.deltas.push_back(delta);
        out.last_delta = delta;
        out.depth_used = depth;
        prev = std::move(cur);
        if (delta < tol) {
            out.converged = true;
            break;
        }
    }
    out.value = std::move(prev);
    return out;
}

double almost_additive_defect(const AlmostAdditiveFunctional& mu, double s, double t,
                              int trials, std::uint64_t seed) {
    if (!(t > s)) throw std::invalid_argument("almost_additive_defect: need t > s");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
        double a = s + (t - s) * uni(rng);
        double b = s + (t - s) * uni(rng);
        double c = s + (t - s) * uni(rng);
        double lo = std::min({a, b, c}), hi = std::max({a, b, c});
        double mid = a + b + c - lo - hi;
        if (!(lo < mid && mid < hi)) continue;
        const std::vector<double> whole = mu.evaluator(lo, hi);
        const std::vector<double> left = mu.evaluator(lo, mid);
        const std::vector<double> right = mu.evaluator(mid, hi);
        double gap = 0.0;
        for (std::size_t i = 0; i < whole.size(); ++i)
            gap = std::max(gap, std::abs(whole[i] - left[i] - right[i]));
        worst = std::max(worst, gap / std::pow(hi - lo, mu.exponent_a));
    }
    return worst;
}

MatrixPath::MatrixPath(std::vector<double> t, int r, int c, std::vector<std::vector<double>> v)
    : times(std::move(t)), rows(r), cols(c), values(std::move(v)) {
    if (times.size() < 2) throw std::invalid_argument("MatrixPath: need >= 2 samples");
    if (times.size() != values.size())
        throw std::invalid_argument("MatrixPath: times/values size mismatch");
    if (rows < 1 || cols < 1) throw std::invalid_argument("MatrixPath: bad shape");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("MatrixPath: times must be strictly increasing");
    for (const auto& x : values)
        if (x.size() != static_cast<std::size_t>(rows) * cols)
            throw std::invalid_argument("MatrixPath: value size does not match rows*cols");
}

std::vector<double> MatrixPath::value_at(double t) const {
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

SewResult young_integral(const MatrixPath& x, const PiecewisePath& y, double s, double t,
                         double tol, int max_depth) {
    if (x.cols != y.dim())
        throw std::invalid_argument("young_integral: matrix cols must match path dimension");
    // Estimate regularity to document the defect exponent of the germ.
    PiecewisePath xflat(x.times, x.values);
    const double ax = std::min(1.0, empirical_holder_exponent(xflat));
    const double ay = std::min(1.0, empirical_holder_exponent(y));
    const double a = ax + ay;
    if (!(a > 1.0))
        emit_warning("young_integral: empirical Holder exponents sum to " + std::to_string(a) +
                     " <= 1; the sewing limit may not exist");
    AlmostAdditiveFunctional mu;
    mu.exponent_a = a;
    mu.evaluator = [&x, &y](double u, double v) {
        const std::vector<double> m = x.value_at(u);
        const std::vector<double> yu = y.value_at(u);
        const std::vector<double> yv = y.value_at(v);
        std::vector<double> out(static_cast<std::size_t>(x.rows), 0.0);
        for (int r = 0; r < x.rows; ++r) {
            double acc = 0.0;
            for (int c = 0; c < x.cols; ++c)
                acc += m[static_cast<std::size_t>(r) * x.cols + c] * (yv[c] - yu[c]);
            out[static_cast<std::size_t>(r)] = acc;
        }
        return out;
    };
    return sew(mu, s, t, tol, max_depth);
}

SewResult young_integral_scalar(const PiecewisePath& x, const PiecewisePath& y, double s,
                                double t, double tol, int max_depth) {
    if (x.dim() != 1 || y.dim() != 1)
        throw std::invalid_argument("young_integral_scalar: paths must be one-dimensional");
    MatrixPath m(x.times, 1, 1, x.values);
    return young_integral(m, y, s, t, tol, max_depth);
}

Control p_variation(const PiecewisePath& path, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("p_variation: need p >= 1");
    PiecewisePath copy = path;
    return Control{[copy, p](double s, double t) -> double {
        if (!(t > s)) return 0.0;
        const auto& times = copy.times;
        auto first_it = std::lower_bound(times.begin(), times.end(), s - 1e-12);
        auto last_it = std::upper_bound(times.begin(), times.end(), t + 1e-12);
        const std::size_t first = static_cast<std::size_t>(first_it - times.begin());
        if (last_it == times.begin()) return 0.0;
        const std::size_t last = static_cast<std::size_t>(last_it - times.begin()) - 1;
        if (last <= first) return 0.0;
        const std::size_t n = last - first + 1;
        // best[k]: largest sum over partitions of [first, first+k] ending at first+k.
        std::vector<double> best(n, 0.0);
        for (std::size_t k = 1; k < n; ++k) {
            double m = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double step = std::pow(norm2(copy.increment(first + i, first + k)), p);
                m = std::max(m, best[i] + step);
            }
            best[k] = m;
        }
        return best[n - 1];
    }};
}

double control_superadditivity_gap(const Control& c, double s, double t, int trials,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
        const double u = s + (t - s) * uni(rng);
        if (!(s < u && u < t)) continue;
        worst = std::max(worst, c(s, u) + c(u, t) - c(s, t));
    }
    return worst;
}

}  // namespace roughpath
