#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "roughpath/sewing.hpp"

namespace roughpath {

/// One-step approximate flow: map(s, t, x) approximates the time-(s,t) flow
/// of some dynamics starting at x, with composition error
/// || map(s,t) - map(u,t) o map(s,u) || <= c1 (t-s)^exponent_a, exponent_a > 1.
/// map(t, t, .) must be the identity.
struct ApproxFlowGenerator {
    std::function<std::vector<double>(double, double, const std::vector<double>&)> map;
    double exponent_a = 2.0;
    double c1 = 0.0;
    std::optional<std::function<std::vector<double>(double, double, const std::vector<double>&)>>
        jacobian;  // row-major d x d, optional
};

struct FlowEvaluation {
    std::vector<double> value;
    int dyadic_depth_used = 0;
    double last_delta = 0.0;
    bool converged = false;
};

/// x advanced through consecutive one-step maps along the partition.
std::vector<double> compose_along_partition(const ApproxFlowGenerator& gen,
                                            const std::vector<double>& partition,
                                            std::vector<double> x);

/// Dyadic-refinement limit of compositions of the one-step map over [s,t]:
/// refine until the sup change between consecutive depths drops below tol.
/// On non-convergence the best value is returned with converged = false.
FlowEvaluation flow_eval(const ApproxFlowGenerator& gen, double s, double t,
                         const std::vector<double>& x, double tol = 1e-9,
                         int max_depth = 20);

struct ConvergenceRow {
    int depth = 0;
    std::vector<double> value;
    double delta = 0.0;  // sup gap to the previous listed depth; NaN on the first row
};

/// Composite values at the listed dyadic depths with successive differences.
std::vector<ConvergenceRow> convergence_table(const ApproxFlowGenerator& gen, double s, double t,
                                              const std::vector<double>& x,
                                              const std::vector<int>& depths);

/// Evaluates the flow of a time-reversed generator; the caller supplies a
/// generator for the reversed dynamics and the result approximates the
/// inverse of the forward flow map over [s,t].
FlowEvaluation inverse_flow_eval(const ApproxFlowGenerator& reversed_gen, double s, double t,
                                 const std::vector<double>& x, double tol = 1e-9,
                                 int max_depth = 20);

/// Spot check that map(t,t,.) is the identity at the given probes.
double generator_identity_gap(const ApproxFlowGenerator& gen, const std::vector<double>& times,
                              const std::vector<std::vector<double>>& probes);

struct IntegralProductResult {
    std::vector<double> matrix;  // row-major d x d
    int dyadic_depth_used = 0;
    double last_delta = 0.0;
    bool converged = false;
};

/// Product integral of a matrix path A: the limit over refinements of
/// products (I + A(t_{k+1}) - A(t_k)), assembled column by column through
/// flow_eval of the generator x + (A(t) - A(s)) x.
IntegralProductResult integral_product(const MatrixPath& A, double s, double t,
                                       double tol = 1e-9, int max_depth = 20);

}  // namespace roughpath
