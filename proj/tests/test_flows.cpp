#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "roughpath/flows.hpp"
#include "roughpath/sewing.hpp"

namespace rp = roughpath;

namespace {

// Exact flow of dx = x dt.
rp::ApproxFlowGenerator exact_exponential() {
    rp::ApproxFlowGenerator gen;
    gen.map = [](double s, double t, const std::vector<double>& x) {
        return std::vector<double>{x[0] * std::exp(t - s)};
    };
    gen.exponent_a = 2.0;
    return gen;
}

// First-order one-step map for the same dynamics.
rp::ApproxFlowGenerator euler_exponential() {
    rp::ApproxFlowGenerator gen;
    gen.map = [](double s, double t, const std::vector<double>& x) {
        return std::vector<double>{x[0] * (1.0 + (t - s))};
    };
    gen.exponent_a = 2.0;
    return gen;
}

}  // namespace

TEST_CASE("composition along a partition") {
    const rp::ApproxFlowGenerator gen = exact_exponential();
    const std::vector<double> part = {0.0, 0.25, 0.3, 0.9, 1.0};
    const std::vector<double> out = rp::compose_along_partition(gen, part, {2.0});
    CHECK(out[0] == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rp::compose_along_partition(gen, {0.0, 0.5, 0.5}, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(rp::compose_along_partition(gen, {0.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("an exact generator converges immediately") {
    const rp::FlowEvaluation r = rp::flow_eval(exact_exponential(), 0.0, 1.0, {1.0}, 1e-12);
    CHECK(r.converged);
    CHECK(r.dyadic_depth_used <= 1);
    CHECK(r.value[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("dyadic refinement drives the Euler map to the true flow") {
    const rp::FlowEvaluation r = rp::flow_eval(euler_exponential(), 0.0, 1.0, {1.0}, 1e-5, 20);
    CHECK(r.converged);
    CHECK(r.last_delta < 1e-5);
    CHECK(r.value[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-4));

    // an impossible tolerance is reported, not silently absorbed
    const rp::FlowEvaluation bad = rp::flow_eval(euler_exponential(), 0.0, 1.0, {1.0}, 1e-13, 6);
    CHECK_FALSE(bad.converged);
    CHECK(bad.last_delta > 1e-13);
}

TEST_CASE("convergence tables decay at the scheme order") {
    const std::vector<int> depths = {2, 3, 4, 5, 6, 7, 8};
    const std::vector<rp::ConvergenceRow> rows =
        rp::convergence_table(euler_exponential(), 0.0, 1.0, {1.0}, depths);
    REQUIRE(rows.size() == depths.size());
    CHECK(std::isnan(rows[0].delta));
    // first-order map: deltas roughly halve with each extra depth
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double ratio = rows[i].delta / rows[i - 1].delta;
        CHECK(ratio > 0.35);
        CHECK(ratio < 0.65);
    }
    CHECK(rows.back().value[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-2));

    CHECK_THROWS_AS(rp::convergence_table(euler_exponential(), 0.0, 1.0, {1.0}, {3, 3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(rp::convergence_table(euler_exponential(), 0.0, 1.0, {1.0}, {-1, 2}),
                    std::invalid_argument);
}

TEST_CASE("inverse flows undo forward flows") {
    // reversed dynamics of dx = x dt is dx = -x dt; its Euler map:
    rp::ApproxFlowGenerator reversed;
    reversed.map = [](double s, double t, const std::vector<double>& x) {
        return std::vector<double>{x[0] * (1.0 - (t - s))};
    };
    reversed.exponent_a = 2.0;
    const rp::FlowEvaluation fwd = rp::flow_eval(euler_exponential(), 0.0, 1.0, {1.0}, 1e-6, 20);
    const rp::FlowEvaluation back =
        rp::inverse_flow_eval(reversed, 0.0, 1.0, fwd.value, 1e-6, 20);
    CHECK(back.converged);
    CHECK(back.value[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("identity defects of generators are visible") {
    CHECK(rp::generator_identity_gap(euler_exponential(), {0.0, 0.3, 1.0},
                                     {{1.0}, {-2.0}}) == doctest::Approx(0.0));
    rp::ApproxFlowGenerator crooked;
    crooked.map = [](double, double, const std::vector<double>& x) {
        return std::vector<double>{x[0] + 0.1};
    };
    CHECK(rp::generator_identity_gap(crooked, {0.0, 1.0}, {{1.0}}) ==
          doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("product integrals of matrix paths") {
    // A(t) = t M with M a rotation generator: the products converge to exp(M)
    const std::vector<double> M = {0.0, 1.0, -1.0, 0.0};
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    for (int i = 0; i <= 8; ++i) {
        const double t = i / 8.0;
        times.push_back(t);
        values.push_back({0.0, t, -t, 0.0});
    }
    const rp::MatrixPath A(times, 2, 2, values);
    const rp::IntegralProductResult r = rp::integral_product(A, 0.0, 1.0, 1e-6, 20);
    CHECK(r.converged);
    CHECK(r.matrix[0] == doctest::Approx(std::cos(1.0)).epsilon(1e-5));
    CHECK(r.matrix[1] == doctest::Approx(std::sin(1.0)).epsilon(1e-5));
    CHECK(r.matrix[2] == doctest::Approx(-std::sin(1.0)).epsilon(1e-5));
    CHECK(r.matrix[3] == doctest::Approx(std::cos(1.0)).epsilon(1e-5));

    // scalar sanity: d(product) = product * dA with A = t gives e
    const rp::MatrixPath a({0.0, 1.0}, 1, 1, {{0.0}, {1.0}});
    const rp::IntegralProductResult s = rp::integral_product(a, 0.0, 1.0, 1e-6, 22);
    CHECK(s.converged);
    CHECK(s.matrix[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-5));

    const rp::MatrixPath bad({0.0, 1.0}, 1, 2, {{0.0, 0.0}, {1.0, 0.0}});
    CHECK_THROWS_AS(rp::integral_product(bad, 0.0, 1.0), std::invalid_argument);
}
