#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace roughpath {

using Vec = std::vector<double>;

inline double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// max_i |a_i - b_i|; sizes must agree.
inline double sup_gap(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_gap: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_add: size mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_sub: size mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

inline Vec vec_scaled(double c, const Vec& a) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

/// y += c * x
inline void axpy(Vec& y, double c, const Vec& x) {
    if (y.size() != x.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

/// Row-major (rows x cols) matrix times vector.
inline Vec mat_vec(const Vec& m, int rows, int cols, const Vec& x) {
    if (m.size() != static_cast<std::size_t>(rows) * cols || x.size() != static_cast<std::size_t>(cols))
        throw std::invalid_argument("mat_vec: shape mismatch");
    Vec y(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
        double s = 0.0;
        const double* row = m.data() + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) s += row[c] * x[c];
        y[r] = s;
    }
    return y;
}

/// Compensated scalar accumulator (Kahan).
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

/// Compensated component-wise accumulator for vectors.
struct CompensatedVecSum {
    Vec sum;
    Vec comp;
    explicit CompensatedVecSum(std::size_t n) : sum(n, 0.0), comp(n, 0.0) {}
    void add(const Vec& x) {
        if (x.size() != sum.size()) throw std::invalid_argument("CompensatedVecSum: size mismatch");
        for (std::size_t i = 0; i < x.size(); ++i) {
            double y = x[i] - comp[i];
            double t = sum[i] + y;
            comp[i] = (t - sum[i]) - y;
            sum[i] = t;
        }
    }
};

/// Least-squares slope of ys against xs.  If out_residual_rms is non-null it
/// receives the root-mean-square residual of the fit.  Needs >= 2 points.
inline double fit_line_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                             double* out_residual_rms = nullptr) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_line_slope: need >= 2 paired points");
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line_slope: degenerate abscissae");
    double slope = sxy / sxx;
    if (out_residual_rms) {
        double intercept = my - slope * mx;
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = ys[i] - (slope * xs[i] + intercept);
            rss += r * r;
        }
        *out_residual_rms = std::sqrt(rss / static_cast<double>(n));
    }
    return slope;
}

}  // namespace roughpath
