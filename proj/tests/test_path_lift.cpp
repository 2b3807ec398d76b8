#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "roughpath/path_lift.hpp"
#include "roughpath/paths.hpp"
#include "roughpath/tensor.hpp"

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

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("segment signature is the exponential of the increment") {
    const std::vector<double> v = {0.7, -0.4};
    const rp::TruncatedTensor s = rp::segment_signature(v, 2);
    CHECK(s.scalar() == doctest::Approx(1.0));
    CHECK(s.level(1)[0] == doctest::Approx(0.7));
    CHECK(s.level(1)[1] == doctest::Approx(-0.4));
    // level 2 = v (x) v / 2
    CHECK(s.level(2)[0] == doctest::Approx(0.5 * 0.7 * 0.7));
    CHECK(s.level(2)[1] == doctest::Approx(0.5 * 0.7 * -0.4));
    CHECK(s.level(2)[2] == doctest::Approx(0.5 * -0.4 * 0.7));
    CHECK(s.level(2)[3] == doctest::Approx(0.5 * -0.4 * -0.4));
}

TEST_CASE("signature lift satisfies the Chen relation") {
    const rp::PiecewisePath path = sampled(20, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::sin(3.0 * t), t * t, std::cos(t)};
    });
    for (int cap : {2, 3}) {
        const rp::RoughPathGrid X = rp::signature(path, cap);
        CHECK(X.level_cap() == cap);
        CHECK(X.weak_geometric);
        REQUIRE(X.size() == path.size());
        // absolute signatures chain through the group law
        for (std::size_t i : {std::size_t(0), std::size_t(4), std::size_t(11)}) {
            for (std::size_t j : {std::size_t(7), std::size_t(15), std::size_t(20)}) {
                if (i > j) continue;
                const rp::TruncatedTensor chen =
                    rp::mul(X.sigs[i], X.increment(i, j));
                CHECK(rp::max_coeff_gap(chen, X.sigs[j]) < 1e-12);
            }
        }
        // increments compose: X_{su} X_{ut} = X_{st}
        const rp::TruncatedTensor lhs = rp::mul(X.increment(2, 9), X.increment(9, 17));
        CHECK(rp::max_coeff_gap(lhs, X.increment(2, 17)) < 1e-12);
        // every increment is group-like
        CHECK(rp::is_group_like(X.increment(3, 16), 1e-9));
    }
}

TEST_CASE("signature of a straight line has no area") {
    const rp::PiecewisePath line = sampled(8, 0.0, 2.0, [](double t) {
        return std::vector<double>{0.5 * t, -t};
    });
    const rp::RoughPathGrid X = rp::signature(line, 2);
    const rp::TruncatedTensor full = X.increment(0, 8);
    const rp::TruncatedTensor expect = rp::segment_signature({1.0, -2.0}, 2);
    CHECK(rp::max_coeff_gap(full, expect) < 1e-12);
    // default p is the smallest admissible one
    CHECK(X.p == doctest::Approx(2.0));
    CHECK(rp::signature(line, 3).p == doctest::Approx(3.0));
    CHECK(rp::signature(line, 2, 2.7).p == doctest::Approx(2.7));
}

TEST_CASE("grids from cells chain and validate") {
    const rp::TruncatedTensor c1 = rp::segment_signature({1.0, 0.0}, 2);
    const rp::TruncatedTensor c2 = rp::segment_signature({0.0, 1.0}, 2);
    const rp::RoughPathGrid X =
        rp::grid_from_cells(2.5, {0.0, 0.5, 1.0}, {c1, c2}, {}, true);
    CHECK(X.base_point == std::vector<double>{0.0, 0.0});
    CHECK(rp::max_coeff_gap(X.sigs[0], rp::TruncatedTensor::unit(2, 2)) == 0.0);
    CHECK(rp::max_coeff_gap(X.sigs[2], rp::mul(c1, c2)) < 1e-15);
    CHECK(rp::max_coeff_gap(X.increment(1, 2), c2) < 1e-15);

    CHECK_THROWS_AS(rp::grid_from_cells(2.5, {0.0, 1.0}, {c1, c2}, {}, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(rp::grid_from_cells(1.5, {0.0, 0.5, 1.0}, {c1, c2}, {}, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(rp::grid_from_cells(4.0, {0.0, 0.5, 1.0}, {c1, c2}, {}, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(rp::grid_from_cells(2.5, {0.0, 0.5, 0.5}, {c1, c2}, {}, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(rp::grid_from_cells(2.5, {0.0, 0.5, 1.0}, {c1, c2}, {1.0}, true),
                    std::invalid_argument);
}

TEST_CASE("increments between off-grid times stay multiplicative") {
    const rp::PiecewisePath path = sampled(10, 0.0, 1.0, [](double t) {
        return std::vector<double>{t, t * t * t};
    });
    const rp::RoughPathGrid X = rp::signature(path, 2);
    // grid points reproduce the integer-index increments
    CHECK(rp::max_coeff_gap(X.increment_between(0.2, 0.7), X.increment(2, 7)) < 1e-13);
    // arbitrary times compose multiplicatively
    const rp::TruncatedTensor left = X.increment_between(0.13, 0.48);
    const rp::TruncatedTensor right = X.increment_between(0.48, 0.91);
    const rp::TruncatedTensor whole = X.increment_between(0.13, 0.91);
    CHECK(rp::max_coeff_gap(rp::mul(left, right), whole) < 1e-12);
    // zero-length increments are the unit
    CHECK(rp::max_coeff_gap(X.increment_between(0.4, 0.4),
                            rp::TruncatedTensor::unit(2, 2)) < 1e-15);
}

TEST_CASE("Holder norms of a linear lift") {
    const rp::PiecewisePath line = sampled(32, 0.0, 1.0, [](double t) {
        return std::vector<double>{t};
    });
    rp::RoughPathGrid X = rp::signature(line, 2, 2.5);
    // |t-s| / (t-s)^{1/p} peaks at the full interval
    CHECK(X.holder_norm(1) == doctest::Approx(1.0).epsilon(1e-12));
    // |(t-s)^2/2| / (t-s)^{2/p} likewise
    CHECK(X.holder_norm(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rp::holder_norm(X, 1) == doctest::Approx(X.holder_norm(1)));
    CHECK_THROWS_AS(X.holder_norm(3), std::invalid_argument);
}

TEST_CASE("Young lift agrees with the exponential lift on smooth paths") {
    const rp::PiecewisePath path = sampled(16, 0.0, 1.0, [](double t) {
        return std::vector<double>{t, t * t};
    });
    const rp::RoughPathGrid young = rp::young_lift(path, 2.5, 1e-8);
    const rp::RoughPathGrid exact = rp::signature(path, 2, 2.5);
    double worst = 0.0;
    for (std::size_t k = 0; k < young.size(); ++k)
        worst = std::max(worst, rp::max_coeff_gap(young.sigs[k], exact.sigs[k]));
    CHECK(worst < 1e-7);
    CHECK(young.weak_geometric);
}

TEST_CASE("pure area rough path") {
    const rp::RoughPathGrid A = rp::pure_area(2.0, 16);
    CHECK(A.dim() == 2);
    CHECK(A.weak_geometric);
    CHECK(A.times.front() == 0.0);
    CHECK(A.times.back() == doctest::Approx(2.0));
    const rp::TruncatedTensor inc = A.increment(3, 11);
    const double dt = A.times[11] - A.times[3];
    CHECK(inc.level(1)[0] == doctest::Approx(0.0));
    CHECK(inc.level(1)[1] == doctest::Approx(0.0));
    CHECK(inc.level(2)[1] == doctest::Approx(kPi * dt));
    CHECK(inc.level(2)[2] == doctest::Approx(-kPi * dt));
    CHECK(inc.level(2)[0] == doctest::Approx(0.0));
    CHECK(inc.level(2)[3] == doctest::Approx(0.0));
    CHECK(rp::is_group_like(inc));
    CHECK_THROWS_AS(rp::pure_area(1.0, 0), std::invalid_argument);
}

TEST_CASE("oscillator paths are small closed loops") {
    const rp::PiecewisePath x = rp::oscillator_path(4, 256);
    CHECK(x.dim() == 2);
    CHECK(x.size() == 257);
    CHECK(x.values.front()[0] == doctest::Approx(0.25));
    CHECK(x.values.front()[1] == doctest::Approx(0.0));
    // n^2 full turns: the path closes
    CHECK(x.values.back()[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(x.values.back()[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(rp::oscillator_path(0, 16), std::invalid_argument);
    CHECK_THROWS_AS(rp::oscillator_path(4, 1), std::invalid_argument);
}

TEST_CASE("oscillator lifts drift towards the pure-area path") {
    const int steps = 1024;
    const rp::RoughPathGrid target = rp::pure_area(1.0, steps);
    const rp::RoughPathGrid l2 = rp::signature(rp::oscillator_path(2, steps), 2, 2.5);
    const rp::RoughPathGrid l8 = rp::signature(rp::oscillator_path(8, steps), 2, 2.5);
    const double d2 = rp::distance(l2, target);
    const double d8 = rp::distance(l8, target);
    CHECK(d8 < d2);
}

TEST_CASE("translation by a smooth path matches lifting the sum") {
    const rp::PiecewisePath x = sampled(24, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::sin(2.0 * t), std::cos(3.0 * t)};
    });
    const rp::PiecewisePath h = sampled(24, 0.0, 1.0, [](double t) {
        return std::vector<double>{t * t, -0.5 * t};
    });
    const rp::RoughPathGrid X = rp::signature(x, 2, 2.5);
    const rp::RoughPathGrid Y = rp::translate(X, h);
    // x + h, sampled on the same grid
    std::vector<std::vector<double>> sums;
    for (std::size_t k = 0; k < x.size(); ++k)
        sums.push_back({x.values[k][0] + h.values[k][0], x.values[k][1] + h.values[k][1]});
    const rp::RoughPathGrid Z = rp::signature(rp::PiecewisePath(x.times, sums), 2, 2.5);
    double worst = 0.0;
    for (std::size_t k = 0; k < Y.size(); ++k)
        worst = std::max(worst, rp::max_coeff_gap(Y.sigs[k], Z.sigs[k]));
    CHECK(worst < 1e-12);
    CHECK(Y.base_point[0] == doctest::Approx(X.base_point[0] + h.values[0][0]));

    // mismatched grids are rejected
    const rp::PiecewisePath other = sampled(10, 0.0, 1.0, [](double t) {
        return std::vector<double>{t, t};
    });
    CHECK_THROWS_AS(rp::translate(X, other), std::invalid_argument);
}

TEST_CASE("pairing with a smooth path matches the joint lift") {
    const rp::PiecewisePath x = sampled(20, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::sin(2.0 * t)};
    });
    const rp::PiecewisePath h = sampled(20, 0.0, 1.0, [](double t) {
        return std::vector<double>{t * t};
    });
    const rp::RoughPathGrid X = rp::signature(x, 2, 2.5);
    const rp::RoughPathGrid P = rp::pair_with_smooth(X, h);
    CHECK(P.dim() == 2);
    // the pair of piecewise-linear paths, lifted jointly
    std::vector<std::vector<double>> joint;
    for (std::size_t k = 0; k < x.size(); ++k)
        joint.push_back({x.values[k][0], h.values[k][0]});
    const rp::RoughPathGrid Z = rp::signature(rp::PiecewisePath(x.times, joint), 2, 2.5);
    double worst = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k)
        worst = std::max(worst, rp::max_coeff_gap(P.sigs[k], Z.sigs[k]));
    CHECK(worst < 1e-12);
}

TEST_CASE("third-level extension reproduces exact signatures") {
    // straight line: the level-3 block is v (x) v (x) v / 6
    const rp::PiecewisePath line = sampled(4, 0.0, 1.0, [](double t) {
        return std::vector<double>{0.8 * t, -0.3 * t};
    });
    const rp::RoughPathGrid X2 = rp::signature(line, 2, 2.5);
    const rp::RoughPathGrid X3 = rp::lyons_extend_level3(X2, 1e-10);
    const rp::RoughPathGrid exact = rp::signature(line, 3, 3.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < X3.size(); ++k)
        worst = std::max(worst, rp::max_coeff_gap(X3.sigs[k], exact.sigs[k]));
    CHECK(worst < 1e-8);

    // general smooth path: extension equals the full level-3 lift
    const rp::PiecewisePath curve = sampled(12, 0.0, 1.0, [](double t) {
        return std::vector<double>{std::sin(2.0 * t), t * t};
    });
    const rp::RoughPathGrid C3 = rp::lyons_extend_level3(rp::signature(curve, 2, 2.5), 1e-10);
    const rp::RoughPathGrid Cexact = rp::signature(curve, 3, 3.0);
    worst = 0.0;
    for (std::size_t k = 0; k < C3.size(); ++k)
        worst = std::max(worst, rp::max_coeff_gap(C3.sigs[k], Cexact.sigs[k]));
    CHECK(worst < 1e-8);

    // pure area: log has no level-1 part, so the extension's third level vanishes
    const rp::RoughPathGrid A3 = rp::lyons_extend_level3(rp::pure_area(1.0, 8));
    for (std::size_t k = 0; k < A3.size(); ++k)
        for (double v : A3.sigs[k].level(3)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("rough-path distance separates lifts and vanishes on equals") {
    const rp::PiecewisePath a = sampled(16, 0.0, 1.0, [](double t) {
        return std::vector<double>{t};
    });
    const rp::PiecewisePath b = sampled(16, 0.0, 1.0, [](double t) {
        return std::vector<double>{2.0 * t};
    });
    const rp::RoughPathGrid X = rp::signature(a, 2, 2.5);
    const rp::RoughPathGrid Y = rp::signature(b, 2, 2.5);
    CHECK(rp::distance(X, X) == 0.0);
    const double d = rp::distance(X, Y);
    CHECK(d == doctest::Approx(1.5).epsilon(1e-12));  // level-2 gap dominates
    CHECK(rp::distance(Y, X) == doctest::Approx(d));

    // incompatible grids are rejected
    const rp::RoughPathGrid Z = rp::signature(a, 2, 2.7);
    CHECK_THROWS_AS(rp::distance(X, Z), std::invalid_argument);
    const rp::RoughPathGrid W = rp::signature(sampled(8, 0.0, 1.0, [](double t) {
                                                  return std::vector<double>{t};
                                              }),
                                              2, 2.5);
    CHECK_THROWS_AS(rp::distance(X, W), std::invalid_argument);
}
