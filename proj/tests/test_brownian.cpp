#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "roughpath/brownian.hpp"
#include "roughpath/path_lift.hpp"
#include "roughpath/rde.hpp"
#include "roughpath/tensor.hpp"
#include "roughpath/vector_field.hpp"

namespace rp = roughpath;

TEST_CASE("samples are deterministic and dyadically structured") {
    const rp::BrownianSample s = rp::BrownianSample::generate(2, 5, 1.0, 42);
    REQUIRE(s.times.size() == 33);
    REQUIRE(s.values.size() == 33);
    REQUIRE(s.increments.size() == 32);
    CHECK(s.values[0][0] == 0.0);
    CHECK(s.values[0][1] == 0.0);
    for (std::size_t i = 0; i < s.times.size(); ++i)
        CHECK(s.times[i] == doctest::Approx(i / 32.0).epsilon(1e-15));
    for (std::size_t i = 0; i < s.increments.size(); ++i)
        for (int c = 0; c < 2; ++c)
            CHECK(s.increments[i][c] ==
                  doctest::Approx(s.values[i + 1][c] - s.values[i][c]).epsilon(1e-15));

    const rp::BrownianSample again = rp::BrownianSample::generate(2, 5, 1.0, 42);
    CHECK(again.values == s.values);
    const rp::BrownianSample other = rp::BrownianSample::generate(2, 5, 1.0, 43);
    CHECK(other.values != s.values);

    // quadratic variation of a depth-8 scalar sample hugs T
    const rp::BrownianSample q = rp::BrownianSample::generate(1, 8, 1.0, 42);
    double qv = 0.0;
    for (const auto& inc : q.increments) qv += inc[0] * inc[0];
    CHECK(std::abs(qv - 1.0) < 0.3);
}

TEST_CASE("refinement reproduces coarse values exactly") {
    const rp::BrownianSample s = rp::BrownianSample::generate(2, 4, 2.0, 7);
    const rp::BrownianSample fine = rp::refine(s, 7);
    REQUIRE(fine.times.size() == 129);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        CHECK(fine.values[8 * k][0] == s.values[k][0]);
        CHECK(fine.values[8 * k][1] == s.values[k][1]);
    }
    // the tree is keyed on the seed, not on the starting depth
    const rp::BrownianSample direct = rp::BrownianSample::generate(2, 7, 2.0, 7);
    CHECK(direct.values == fine.values);
    // coarsening is the grid restriction
    const rp::BrownianSample coarse = rp::refine(fine, 4);
    CHECK(coarse.values == s.values);
}

TEST_CASE("paths and piecewise-linear lifts") {
    const rp::BrownianSample s = rp::BrownianSample::generate(2, 4, 1.0, 11);
    const rp::PiecewisePath path = rp::to_path(s);
    CHECK(path.dim() == 2);
    CHECK(path.times == s.times);
    CHECK(path.values == s.values);

    const rp::RoughPathGrid X = rp::piecewise_linear_lift(s, 2.5);
    CHECK(X.p == 2.5);
    CHECK(X.level_cap() == 2);
    CHECK(X.weak_geometric);
    CHECK(X.times == s.times);
    for (int i = 0; i + 1 < static_cast<int>(X.size()); ++i) {
        const rp::TruncatedTensor cell = X.increment(i, i + 1);
        const std::vector<double>& db = s.increments[static_cast<std::size_t>(i)];
        for (int a = 0; a < 2; ++a) {
            CHECK(cell.level(1)[a] == doctest::Approx(db[a]).epsilon(1e-14));
            for (int b = 0; b < 2; ++b)
                CHECK(cell.level(2)[2 * a + b] ==
                      doctest::Approx(0.5 * db[a] * db[b]).epsilon(1e-13));
        }
    }
}

TEST_CASE("Stratonovich-type lifts carry bridge areas") {
    const rp::BrownianSample s = rp::BrownianSample::generate(2, 4, 1.0, 3);
    const rp::RoughPathGrid X = rp::stratonovich_lift(s, 4, 2.5);
    CHECK(X.weak_geometric);
    CHECK(X.times == s.times);

    double total_area = 0.0;
    for (int i = 0; i + 1 < static_cast<int>(X.size()); ++i) {
        const rp::TruncatedTensor cell = X.increment(i, i + 1);
        const std::vector<double>& db = s.increments[static_cast<std::size_t>(i)];
        // level 1 is the exact sample increment
        CHECK(cell.level(1)[0] == doctest::Approx(db[0]).epsilon(1e-12));
        CHECK(cell.level(1)[1] == doctest::Approx(db[1]).epsilon(1e-12));
        // symmetric part is pinned by geometricity
        CHECK(cell.level(2)[1] + cell.level(2)[2] ==
              doctest::Approx(db[0] * db[1]).epsilon(1e-11));
        CHECK(cell.level(2)[0] == doctest::Approx(0.5 * db[0] * db[0]).epsilon(1e-11));
        CHECK(rp::is_group_like(cell, 1e-9));
        total_area += 0.5 * (cell.level(2)[1] - cell.level(2)[2]);
    }
    // the bridge areas are genuinely there (almost surely nonzero)
    CHECK(std::abs(total_area) > 1e-6);
}

TEST_CASE("the Ito-type lift shifts the level-2 diagonal") {
    const rp::BrownianSample s = rp::BrownianSample::generate(2, 4, 1.0, 19);
    const rp::RoughPathGrid strat = rp::stratonovich_lift(s, 4, 2.5);
    const rp::RoughPathGrid ito = rp::ito_lift(strat);
    CHECK_FALSE(ito.weak_geometric);
    CHECK(ito.times == strat.times);

    const double h = s.times[1] - s.times[0];
    for (int i = 0; i + 1 < static_cast<int>(ito.size()); ++i) {
        const rp::TruncatedTensor a = strat.increment(i, i + 1);
        const rp::TruncatedTensor b = ito.increment(i, i + 1);
        CHECK(b.level(1)[0] == doctest::Approx(a.level(1)[0]).epsilon(1e-12));
        CHECK(b.level(2)[0] == doctest::Approx(a.level(2)[0] - 0.5 * h).epsilon(1e-12));
        CHECK(b.level(2)[3] == doctest::Approx(a.level(2)[3] - 0.5 * h).epsilon(1e-12));
        CHECK(b.level(2)[1] == doctest::Approx(a.level(2)[1]).epsilon(1e-12));
        CHECK(b.level(2)[2] == doctest::Approx(a.level(2)[2]).epsilon(1e-12));
    }
    // over the whole horizon the diagonal drops by T/2
    const rp::TruncatedTensor full_s = strat.increment(0, strat.size() - 1);
    const rp::TruncatedTensor full_i = ito.increment(0, ito.size() - 1);
    CHECK(full_s.level(2)[0] - full_i.level(2)[0] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("Levy area statistics sit inside their own error bars") {
    const rp::LevyAreaStats st = rp::levy_area_stats(4000, 6, 1.0, 9);
    CHECK(st.samples == 4000);
    CHECK(st.depth == 6);
    CHECK(st.T == 1.0);
    CHECK(st.mean_ci3 > 0.0);
    CHECK(st.variance_ci3 > 0.0);
    CHECK(std::abs(st.mean) <= st.mean_ci3);
    // discrete-area variance at depth n is T^2/4 (1 - 2^-n)
    const double expect = 0.25 * (1.0 - 1.0 / 64.0);
    CHECK(std::abs(st.variance - expect) <= st.variance_ci3);
}

TEST_CASE("smooth approximations converge to the Stratonovich solution") {
    // commuting (scalar) noise: the interpolated ODE already agrees with the
    // Stratonovich solution at every grid node, so the gaps are pure solver
    // noise at every depth
    const rp::VectorFieldSet F(1, {{rp::parse_expr("x1")}});
    const rp::WongZakaiResult wz =
        rp::wong_zakai_experiment(F, {1.0}, {3, 6}, 2026, 1.0, 1e-6, 8, 2.5, 4);
    REQUIRE(wz.gaps.size() == 2);
    CHECK(wz.depths == std::vector<int>{3, 6});
    CHECK(wz.reference.converged);
    CHECK(wz.gaps[0] < 1e-5);
    CHECK(wz.gaps[1] < 1e-5);
    // and the reference endpoint is exp(B_T) for dx = x dB
    const rp::BrownianSample s = rp::BrownianSample::generate(1, 3, 1.0, 2026);
    CHECK(wz.reference.states.back()[0] ==
          doctest::Approx(std::exp(s.values.back()[0])).epsilon(1e-3));

    // noncommuting planar noise: the area matters and the gap decays with depth
    const rp::VectorFieldSet G(2, {{rp::parse_expr("sin(x2)"), rp::parse_expr("x1")},
                                   {rp::parse_expr("x2"), rp::parse_expr("cos(x1)")}});
    const rp::WongZakaiResult wz2 =
        rp::wong_zakai_experiment(G, {0.1, 0.2}, {3, 7}, 2026, 1.0, 1e-6, 8, 2.5, 4);
    REQUIRE(wz2.gaps.size() == 2);
    CHECK(wz2.reference.converged);
    CHECK(wz2.gaps[1] < wz2.gaps[0]);
    CHECK(wz2.gaps[0] > 1e-6);  // the coarse interpolation visibly misses
    CHECK(wz2.gaps[1] < 0.5);
}

TEST_CASE("rough integrals against Ito and Stratonovich lifts") {
    const rp::BrownianSample s = rp::BrownianSample::generate(1, 10, 1.0, 5);
    auto G = [](const std::vector<double>& b) { return std::vector<double>{b[0]}; };
    auto dG = [](const std::vector<double>&) { return std::vector<double>{1.0}; };

    const double bT = s.values.back()[0];
    const double ito_exact = 0.5 * bT * bT - 0.5;

    const rp::RoughItoComparison ito = rp::rough_vs_ito_integral(s, G, dG, 1, 10, 1e-8, false);
    CHECK(ito.converged);
    CHECK(std::abs(ito.rough_value[0] - ito_exact) < 0.1);
    // the left-point Riemann sum estimates the same integral
    CHECK(std::abs(ito.gap) < 0.05);

    const rp::RoughItoComparison strat = rp::rough_vs_ito_integral(s, G, dG, 1, 10, 1e-8, true);
    CHECK(strat.converged);
    CHECK(std::abs(strat.rough_value[0] - 0.5 * bT * bT) < 0.1);
    // the two integrals differ by T/2, visible as the gap to the left sums
    CHECK(strat.gap == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("delayed pairs are consistent shifts of one trajectory") {
    const rp::BrownianSample s = rp::BrownianSample::generate(1, 4, 1.0, 23);
    const double h = 1.0 / 16.0;
    const rp::RoughPathGrid X = rp::delayed_pair(s, 2.0 * h, 2.5);
    CHECK(X.dim() == 2);
    CHECK(X.weak_geometric);
    CHECK(X.times == s.times);

    // the second coordinate runs two cells ahead of the first
    for (int i = 0; i + 3 < static_cast<int>(X.size()); ++i) {
        const double ahead = X.increment(i, i + 1).level(1)[1];
        const double base = X.increment(i + 2, i + 3).level(1)[0];
        CHECK(ahead == doctest::Approx(base).epsilon(1e-12));
    }

    CHECK_THROWS_AS(rp::delayed_pair(s, 0.3 * h), std::invalid_argument);
    CHECK_THROWS_AS(rp::delayed_pair(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rp::delayed_pair(s, 2.0), std::invalid_argument);
    const rp::BrownianSample planar = rp::BrownianSample::generate(2, 4, 1.0, 23);
    CHECK_THROWS_AS(rp::delayed_pair(planar, 2.0 * h), std::invalid_argument);
}

TEST_CASE("joint lifts follow the left-point convention blockwise") {
    const rp::BrownianSample s = rp::BrownianSample::generate(1, 3, 1.0, 31);
    // a smooth deterministic component on the same grid
    std::vector<std::vector<double>> vals;
    for (double t : s.times) vals.push_back({t * t});
    const rp::PiecewisePath smooth(s.times, vals);
    const rp::RoughPathGrid X = rp::signature(smooth, 2, 2.5);

    const rp::RoughPathGrid J = rp::joint_lift(X, s, 4);
    CHECK(J.dim() == 2);
    CHECK_FALSE(J.weak_geometric);
    CHECK(J.times == s.times);

    const rp::RoughPathGrid ito = rp::ito_lift(rp::stratonovich_lift(s, 4, 2.5));
    const double h = s.times[1] - s.times[0];
    (void)h;
    for (int i = 0; i + 1 < static_cast<int>(J.size()); ++i) {
        const rp::TruncatedTensor cell = J.increment(i, i + 1);
        const rp::TruncatedTensor xc = X.increment(i, i + 1);
        const rp::TruncatedTensor bc = ito.increment(i, i + 1);
        const double dx = xc.level(1)[0];
        const double db = bc.level(1)[0];
        CHECK(cell.level(1)[0] == doctest::Approx(dx).epsilon(1e-13));
        CHECK(cell.level(1)[1] == doctest::Approx(db).epsilon(1e-13));
        // (X,X) block from X, (B,B) block from the Ito lift
        CHECK(cell.level(2)[0] == doctest::Approx(xc.level(2)[0]).epsilon(1e-12));
        CHECK(cell.level(2)[3] == doctest::Approx(bc.level(2)[0]).epsilon(1e-12));
        // X against dB vanishes at cell level; B against dX by parts
        CHECK(cell.level(2)[1] == doctest::Approx(0.0));
        CHECK(cell.level(2)[2] == doctest::Approx(db * dx).epsilon(1e-12));
    }

    const rp::BrownianSample offgrid = rp::BrownianSample::generate(1, 4, 1.0, 31);
    CHECK_THROWS_AS(rp::joint_lift(X, offgrid, 4), std::invalid_argument);
}
