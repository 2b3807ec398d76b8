#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "roughpath/paths.hpp"

namespace roughpath {

/// Two-parameter germ mu(s,t) with values in R^m together with its declared
/// almost-additivity data: || mu(s,t) - mu(u,t) - mu(s,u) || <= defect_constant
/// * (t-s)^exponent_a with exponent_a > 1.
struct AlmostAdditiveFunctional {
    std::function<std::vector<double>(double, double)> evaluator;
    double exponent_a = 2.0;
    double defect_constant = 0.0;
};

/// Outcome of a dyadic sewing run.  deltas[k] is the sup-norm change from the
/// Riemann sum on 2^k intervals to the one on 2^(k+1) intervals.
struct SewResult {
    std::vector<double> value;
    double last_delta = 0.0;
    int depth_used = 0;
    bool converged = false;
    std::vector<double> deltas;
};

/// Limit of Riemann sums of mu over dyadic partitions of [s,t], refined until
/// the change between consecutive depths drops below tol (or max_depth is
/// reached, in which case converged = false and the best value is returned).
SewResult sew(const AlmostAdditiveFunctional& mu, double s, double t,
              double tol = 1e-9, int max_depth = 22);

/// Monte-Carlo spot check of the almost-additivity defect: max over random
/// s <= s' < u < t' <= t of ||mu(s',t') - mu(u,t') - mu(s',u)|| / (t'-s')^a.
double almost_additive_defect(const AlmostAdditiveFunctional& mu, double s, double t,
                              int trials = 64, std::uint64_t seed = 1);

/// Sampled path of rows x cols matrices (row-major), linearly interpolated.
struct MatrixPath {
    std::vector<double> times;
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<double>> values;  // rows*cols entries per sample

    MatrixPath() = default;
    MatrixPath(std::vector<double> t, int r, int c, std::vector<std::vector<double>> v);
    std::vector<double> value_at(double t) const;
};

/// Integral of the matrix path x against dy for a path y of dimension cols,
/// computed by sewing the germ mu(u,v) = x(u) (y(v) - y(u)).  The defect
/// exponent is estimated from the empirical Holder exponents of x and y; a
/// warning is emitted when their sum does not exceed 1.
SewResult young_integral(const MatrixPath& x, const PiecewisePath& y, double s, double t,
                         double tol = 1e-9, int max_depth = 22);

/// Scalar convenience wrapper: both paths one-dimensional, returns the full result.
SewResult young_integral_scalar(const PiecewisePath& x, const PiecewisePath& y, double s,
                                double t, double tol = 1e-9, int max_depth = 22);

/// Super-additive two-parameter functional.
struct Control {
    std::function<double(double, double)> evaluator;
    double operator()(double s, double t) const { return evaluator(s, t); }
};

/// p-variation control of a sampled path: omega(s,t) is the p-variation of
/// the path restricted to grid points inside [s,t], computed by dynamic
/// programming over subsequences.
Control p_variation(const PiecewisePath& path, double p);

/// Spot check of super-additivity: max over random s < u < t of
/// c(s,u) + c(u,t) - c(s,t); positive values witness a violation.
double control_superadditivity_gap(const Control& c, double s, double t,
                                   int trials = 64, std::uint64_t seed = 1);

}  // namespace roughpath
