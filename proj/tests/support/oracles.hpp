// Independent reference computations for the test suite.  Everything here is
// deliberately implemented with different algorithms than the library under
// test: matrix exponentials come from Eigen's scaling-and-squaring, iterated
// integrals from nested cumulative Simpson quadrature, and ODE references
// from a plain fixed-step RK4.
#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracles {

/// exp of a row-major d x d matrix (scaling-and-squaring via Eigen).
inline std::vector<double> matrix_exponential(const std::vector<double>& m, int d) {
    if (m.size() != static_cast<std::size_t>(d) * d)
        throw std::invalid_argument("matrix_exponential: size mismatch");
    Eigen::MatrixXd A(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) A(r, c) = m[static_cast<std::size_t>(r) * d + c];
    const Eigen::MatrixXd E = A.exp();
    std::vector<double> out(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out[static_cast<std::size_t>(r) * d + c] = E(r, c);
    return out;
}

/// Cumulative integral of samples f(u_0..u_n) on a uniform grid with spacing
/// h, fourth order at every node: each panel increment integrates the
/// quadratic through the surrounding three samples.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("cumulative_simpson: need >= 3 samples");
    std::vector<double> cum(n, 0.0);
    for (std::size_t m = 0; m + 1 < n; ++m) {
        double inc;
        if (m + 2 < n)
            inc = h / 12.0 * (5.0 * f[m] + 8.0 * f[m + 1] - f[m + 2]);
        else
            inc = h / 12.0 * (-f[m - 1] + 8.0 * f[m] + 5.0 * f[m + 1]);
        cum[m + 1] = cum[m] + inc;
    }
    return cum;
}

/// Simplex iterated integral of derivative samples:
///   int_{s < u_1 < ... < u_k < t} f_1(u_1) ... f_k(u_k) du,
/// with f_j sampled on the common uniform grid (n+1 points, spacing h).
inline double simplex_integral(const std::vector<std::vector<double>>& f, double h) {
    if (f.empty()) throw std::invalid_argument("simplex_integral: no integrands");
    std::vector<double> cum = cumulative_simpson(f[0], h);
    for (std::size_t j = 1; j < f.size(); ++j) {
        std::vector<double> g(f[j].size());
        if (f[j].size() != cum.size())
            throw std::invalid_argument("simplex_integral: sample count mismatch");
        for (std::size_t m = 0; m < g.size(); ++m) g[m] = f[j][m] * cum[m];
        cum = cumulative_simpson(g, h);
    }
    return cum.back();
}

/// Fixed-step classical RK4 for dx/dt = f(t, x); returns the state at t1.
inline std::vector<double> rk4_integrate(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& f, double t0,
    double t1, std::vector<double> x, int steps) {
    if (steps < 1) throw std::invalid_argument("rk4_integrate: steps must be >= 1");
    const double h = (t1 - t0) / steps;
    const std::size_t d = x.size();
    for (int k = 0; k < steps; ++k) {
        const double t = t0 + k * h;
        const std::vector<double> k1 = f(t, x);
        std::vector<double> y(d);
        for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k1[i];
        const std::vector<double> k2 = f(t + 0.5 * h, y);
        for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + 0.5 * h * k2[i];
        const std::vector<double> k3 = f(t + 0.5 * h, y);
        for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + h * k3[i];
        const std::vector<double> k4 = f(t + h, y);
        for (std::size_t i = 0; i < d; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return x;
}

}  // namespace oracles
