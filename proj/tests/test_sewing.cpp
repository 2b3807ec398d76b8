#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "roughpath/paths.hpp"
#include "roughpath/sewing.hpp"

namespace rp = roughpath;

namespace {

rp::PiecewisePath sampled(int n, double t0, double t1,
                          const std::function<std::vector<double>(double)>& f) {
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    for (int i = 0; i <= n; ++i) {
        const double t = t0 + (t1 - t0) * i / n;
        times.push_back(t);
        values.push_back(f(t));
    }
    return rp::PiecewisePath(std::move(times), std::move(values));
}

}  // namespace

TEST_CASE("piecewise path construction and interpolation") {
    const rp::PiecewisePath x({0.0, 1.0, 3.0}, {{0.0, 1.0}, {2.0, 1.0}, {2.0, -3.0}});
    CHECK(x.dim() == 2);
    CHECK(x.size() == 3);
    CHECK(x.value_at(0.5) == std::vector<double>{1.0, 1.0});
    CHECK(x.value_at(2.0) == std::vector<double>{2.0, -1.0});
    // clamping outside the horizon
    CHECK(x.value_at(-1.0) == std::vector<double>{0.0, 1.0});
    CHECK(x.value_at(9.0) == std::vector<double>{2.0, -3.0});
    CHECK(x.increment(0, 2) == std::vector<double>{2.0, -4.0});

    CHECK_THROWS_AS(rp::PiecewisePath({0.0}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(rp::PiecewisePath({0.0, 0.0}, {{1.0}, {2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(rp::PiecewisePath({1.0, 0.0}, {{1.0}, {2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(rp::PiecewisePath({0.0, 1.0}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(rp::PiecewisePath({0.0, 1.0}, {{1.0}, {2.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("empirical Holder exponent diagnoses regularity") {
    const rp::PiecewisePath line = sampled(512, 0.0, 1.0, [](double t) {
        return std::vector<double>{t};
    });
    CHECK(rp::empirical_holder_exponent(line) == doctest::Approx(1.0).epsilon(0.05));

    const rp::PiecewisePath root = sampled(4096, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::sqrt(t)};
    });
    const double alpha = rp::empirical_holder_exponent(root);
    CHECK(alpha > 0.4);
    CHECK(alpha < 0.65);

    const rp::PiecewisePath flat = sampled(16, 0.0, 1.0, [](double) {
        return std::vector<double>{2.5};
    });
    CHECK(std::isinf(rp::empirical_holder_exponent(flat)));
}

TEST_CASE("sewing an additive germ returns its increment immediately") {
    rp::AlmostAdditiveFunctional mu;
    mu.evaluator = [](double s, double t) {
        return std::vector<double>{std::sin(t) - std::sin(s)};
    };
    mu.exponent_a = 2.0;
    const rp::SewResult r = rp::sew(mu, 0.0, 1.5, 1e-12, 10);
    CHECK(r.converged);
    CHECK(r.depth_used <= 2);
    CHECK(r.value[0] == doctest::Approx(std::sin(1.5)).epsilon(1e-12));
}

TEST_CASE("sewing the Young germ of t d(t^2) hits 2/3") {
    rp::AlmostAdditiveFunctional mu;
    mu.evaluator = [](double s, double t) {
        return std::vector<double>{s * (t * t - s * s)};
    };
    mu.exponent_a = 2.0;
    const rp::SewResult r = rp::sew(mu, 0.0, 1.0, 2e-7, 22);
    CHECK(r.converged);
    CHECK(r.value[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    // refinement gaps decay from the start for this germ
    REQUIRE(r.deltas.size() >= 4);
    for (std::size_t i = 1; i + 1 < r.deltas.size(); ++i)
        CHECK(r.deltas[i + 1] < r.deltas[i]);
}

TEST_CASE("sewing reports non-convergence for an inconsistent germ") {
    rp::AlmostAdditiveFunctional mu;
    mu.evaluator = [](double s, double t) {
        return std::vector<double>{std::pow(t - s, 0.3)};
    };
    mu.exponent_a = 2.0;  // deliberately wrong: the germ is nowhere near additive
    const rp::SewResult r = rp::sew(mu, 0.0, 1.0, 1e-9, 8);
    CHECK_FALSE(r.converged);
    CHECK(r.last_delta > 1e-3);
}

TEST_CASE("sewing validates its arguments") {
    rp::AlmostAdditiveFunctional mu;
    mu.evaluator = [](double s, double t) { return std::vector<double>{t - s}; };
    CHECK_THROWS_AS(rp::sew(mu, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(rp::sew(mu, 0.0, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(rp::sew(mu, 0.0, 1.0, 1e-9, 0), std::invalid_argument);
    rp::AlmostAdditiveFunctional empty;
    CHECK_THROWS_AS(rp::sew(empty, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("spot-checked defect detects genuine almost-additivity") {
    rp::AlmostAdditiveFunctional additive;
    additive.evaluator = [](double s, double t) {
        return std::vector<double>{std::cos(s) - std::cos(t)};
    };
    additive.exponent_a = 2.0;
    CHECK(rp::almost_additive_defect(additive, 0.0, 1.0) < 1e-12);

    rp::AlmostAdditiveFunctional young;
    young.evaluator = [](double s, double t) {
        return std::vector<double>{s * (t * t - s * s)};
    };
    young.exponent_a = 2.0;
    const double defect = rp::almost_additive_defect(young, 0.0, 1.0);
    CHECK(defect > 0.01);   // the Young germ has a genuine second-order defect
    CHECK(defect < 10.0);
}

TEST_CASE("matrix path interpolation") {
    const rp::MatrixPath A({0.0, 1.0}, 2, 2,
                           {{1.0, 0.0, 0.0, 1.0}, {1.0, 2.0, -2.0, 1.0}});
    const std::vector<double> mid = A.value_at(0.5);
    CHECK(mid == std::vector<double>{1.0, 1.0, -1.0, 1.0});
    CHECK_THROWS_AS(rp::MatrixPath({0.0, 1.0}, 2, 2, {{1.0}, {1.0}}), std::invalid_argument);
}

TEST_CASE("Young integral against a matrix integrand") {
    // constant integrand: the integral telescopes to x * (y_t - y_s) exactly
    const rp::MatrixPath x({0.0, 1.0}, 2, 2,
                           {{2.0, 0.0, 0.0, 3.0}, {2.0, 0.0, 0.0, 3.0}});
    const rp::PiecewisePath y = sampled(64, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::sin(t), std::cos(t)};
    });
    const rp::SewResult r = rp::young_integral(x, y, 0.0, 1.0, 1e-10);
    CHECK(r.converged);
    CHECK(r.value[0] == doctest::Approx(2.0 * std::sin(1.0)).epsilon(1e-9));
    CHECK(r.value[1] == doctest::Approx(3.0 * (std::cos(1.0) - 1.0)).epsilon(1e-9));

    // dimension mismatch is rejected
    const rp::MatrixPath bad({0.0, 1.0}, 1, 3, {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
    CHECK_THROWS_AS(rp::young_integral(bad, y, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("scalar Young integrals of smooth paths") {
    const rp::PiecewisePath tpath = sampled(1024, 0.0, 1.0, [](double t) {
        return std::vector<double>{t};
    });
    const rp::PiecewisePath t2path = sampled(1024, 0.0, 1.0, [](double t) {
        return std::vector<double>{t * t};
    });
    const rp::SewResult r = rp::young_integral_scalar(tpath, t2path, 0.0, 1.0, 2e-7);
    CHECK(r.converged);
    CHECK(r.value[0] == doctest::Approx(2.0 / 3.0).epsilon(2e-6));

    // int y dy = (y(1)^2 - y(0)^2) / 2 for any smooth y
    const rp::PiecewisePath ypath = sampled(1024, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::exp(t)};
    });
    const rp::SewResult r2 = rp::young_integral_scalar(ypath, ypath, 0.0, 1.0, 1e-6);
    CHECK(r2.converged);
    const double want = 0.5 * (std::exp(2.0) - 1.0);
    CHECK(r2.value[0] == doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("p-variation control is superadditive and grid-exact") {
    // monotone path: 2-variation over the whole interval is the squared total
    // increment (coarsest partition wins)
    const rp::PiecewisePath line = sampled(16, 0.0, 1.0, [](double t) {
        return std::vector<double>{t};
    });
    const rp::Control c = rp::p_variation(line, 2.0);
    CHECK(c(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(0.0, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rp::control_superadditivity_gap(c, 0.0, 1.0) <= 1e-12);

    // oscillating path: superadditivity still holds
    const rp::PiecewisePath wiggle = sampled(64, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::sin(12.0 * t)};
    });
    const rp::Control cw = rp::p_variation(wiggle, 3.0);
    CHECK(rp::control_superadditivity_gap(cw, 0.0, 1.0) <= 1e-12);
    CHECK(cw(0.0, 1.0) > 0.0);

    CHECK_THROWS_AS(rp::p_variation(line, 0.5), std::invalid_argument);
}
