#include "roughpath/flows.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughpath/linalg.hpp"

namespace roughpath {

std::vector<double> compose_along_partition(const ApproxFlowGenerator& gen,
                                            const std::vector<double>& partition,
                                            std::vector<double> x) {
    if (!gen.map) throw std::invalid_argument("compose_along_partition: missing map");
    if (partition.size() < 2)
        throw std::invalid_argument("compose_along_partition: need >= 2 partition points");
    for (std::size_t i = 1; i < partition.size(); ++i)
        if (!(partition[i] > partition[i - 1]))
            throw std::invalid_argument("compose_along_partition: partition must increase");
    for (std::size_t i = 0; i + 1 < partition.size(); ++i)
        x = gen.map(partition[i], partition[i + 1], x);
    return x;
}

namespace {

std::vector<double> dyadic_composite(const ApproxFlowGenerator& gen, double s, double t,
                                     std::vector<double> x, int depth) {
    const std::size_t pieces = std::size_t{1} << depth;
    for (std::size_t i = 0; i < pieces; ++i) {
        const double u = s + (t - s) * static_cast<double>(i) / static_cast<double>(pieces);
        const double v = s + (t - s) * static_cast<double>(i + 1) / static_cast<double>(pieces);
        x = gen.map(u, v, x);
    }
    return x;
}

}  // namespace

FlowEvaluation flow_eval(const ApproxFlowGenerator& gen, double s, double t,
                         const std::vector<double>& x, double tol, int max_depth) {
    if (!gen.map) throw std::invalid_argument("flow_eval: missing map");
    if (!(t > s)) throw std::invalid_argument("flow_eval: need t > s");
    if (!(tol > 0.0)) throw std::invalid_argument("flow_eval: tol must be positive");

    FlowEvaluation out;
    std::vector<double> prev = gen.map(s, t, x);
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<double> cur = dyadic_composite(gen, s, t, x, depth);
        const double delta = sup_gap(cur, prev);
        out.last_delta = delta;
        out.dyadic_depth_used = depth;
        prev = std::move(cur);
        if (delta < tol) {
            out.converged = true;
            break;
        }
    }
    out.value = std::move(prev);
    return out;
}

std::vector<ConvergenceRow> convergence_table(const ApproxFlowGenerator& gen, double s, double t,
                                              const std::vector<double>& x,
                                              const std::vector<int>& depths) {
    if (depths.empty()) throw std::invalid_argument("convergence_table: no depths given");
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (depths[i] < 0) throw std::invalid_argument("convergence_table: negative depth");
        if (i > 0 && depths[i] <= depths[i - 1])
            throw std::invalid_argument("convergence_table: depths must increase");
    }
    std::vector<ConvergenceRow> rows;
    rows.reserve(depths.size());
    for (std::size_t i = 0; i < depths.size(); ++i) {
        ConvergenceRow row;
        row.depth = depths[i];
        row.value = dyadic_composite(gen, s, t, x, depths[i]);
        row.delta = (i == 0) ? std::numeric_limits<double>::quiet_NaN()
                             : sup_gap(row.value, rows.back().value);
        rows.push_back(std::move(row));
    }
    return rows;
}

FlowEvaluation inverse_flow_eval(const ApproxFlowGenerator& reversed_gen, double s, double t,
                                 const std::vector<double>& x, double tol, int max_depth) {
    return flow_eval(reversed_gen, s, t, x, tol, max_depth);
}

double generator_identity_gap(const ApproxFlowGenerator& gen, const std::vector<double>& times,
                              const std::vector<std::vector<double>>& probes) {
    if (!gen.map) throw std::invalid_argument("generator_identity_gap: missing map");
    double worst = 0.0;
    for (double t : times)
        for (const auto& x : probes)
            worst = std::max(worst, sup_gap(gen.map(t, t, x), x));
    return worst;
}

IntegralProductResult integral_product(const MatrixPath& A, double s, double t, double tol,
                                       int max_depth) {
    if (A.rows != A.cols) throw std::invalid_argument("integral_product: matrix path must be square");
    const int d = A.rows;
    ApproxFlowGenerator gen;
    gen.exponent_a = 2.0;
    gen.map = [&A, d](double u, double v, const std::vector<double>& x) {
        const std::vector<double> au = A.value_at(u);
        const std::vector<double> av = A.value_at(v);
        std::vector<double> y = x;
        for (int r = 0; r < d; ++r) {
            double acc = 0.0;
            for (int c = 0; c < d; ++c)
                acc += (av[static_cast<std::size_t>(r * d + c)] - au[static_cast<std::size_t>(r * d + c)]) * x[static_cast<std::size_t>(c)];
            y[static_cast<std::size_t>(r)] += acc;
        }
        return y;
    };

    IntegralProductResult out;
    out.matrix.assign(static_cast<std::size_t>(d) * d, 0.0);
    out.converged = true;
    for (int c = 0; c < d; ++c) {
        std::vector<double> e(static_cast<std::size_t>(d), 0.0);
        e[static_cast<std::size_t>(c)] = 1.0;
        const FlowEvaluation col = flow_eval(gen, s, t, e, tol, max_depth);
        out.converged = out.converged && col.converged;
        out.last_delta = std::max(out.last_delta, col.last_delta);
        out.dyadic_depth_used = std::max(out.dyadic_depth_used, col.dyadic_depth_used);
        for (int r = 0; r < d; ++r)
            out.matrix[static_cast<std::size_t>(r * d + c)] = col.value[static_cast<std::size_t>(r)];
    }
    return out;
}

}  // namespace roughpath
