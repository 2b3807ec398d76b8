#include "roughpath/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "roughpath/controlled.hpp"
#include "roughpath/linalg.hpp"

namespace roughpath {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t z) {
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

/// Deterministic standard normal for a bridge node, keyed on
/// (seed, level, node index among that level's new midpoints, coordinate).
double node_normal(std::uint64_t seed, int level, std::uint64_t index, int coord) {
    std::uint64_t h = mix64(seed ^ 0xA0761D6478BD642Full);
    h = mix64(h ^ static_cast<std::uint64_t>(level));
    h = mix64(h ^ index);
    h = mix64(h ^ static_cast<std::uint64_t>(coord));
    const double u1 = uniform01(mix64(h ^ 0x8BB84B93962EACC9ull));
    const double u2 = uniform01(mix64(h ^ 0x2F9BE6CC620B21ADull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

BrownianSample BrownianSample::generate(int dim, int depth, double T, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("BrownianSample: dim must be >= 1");
    if (depth < 1 || depth > 24)
        throw std::invalid_argument("BrownianSample: depth must lie in [1, 24]");
    if (!(T > 0.0)) throw std::invalid_argument("BrownianSample: need T > 0");

    BrownianSample s;
    s.dim = dim;
    s.depth = depth;
    s.T = T;
    s.seed = seed;

    std::vector<std::vector<double>> vals(2, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    for (int c = 0; c < dim; ++c)
        vals[1][static_cast<std::size_t>(c)] = std::sqrt(T) * node_normal(seed, 0, 0, c);
    for (int m = 1; m <= depth; ++m) {
        const std::size_t old_n = vals.size();                 // 2^(m-1) + 1
        const double parent_spacing = T / std::ldexp(1.0, m - 1);
        const double sd = std::sqrt(parent_spacing / 4.0);
        std::vector<std::vector<double>> next(2 * old_n - 1);
        for (std::size_t j = 0; j < old_n; ++j) next[2 * j] = vals[j];
        for (std::size_t j = 0; j + 1 < old_n; ++j) {
            std::vector<double> mid(static_cast<std::size_t>(dim));
            for (int c = 0; c < dim; ++c)
                mid[static_cast<std::size_t>(c)] =
                    0.5 * (vals[j][static_cast<std::size_t>(c)] + vals[j + 1][static_cast<std::size_t>(c)]) +
                    sd * node_normal(seed, m, static_cast<std::uint64_t>(j), c);
            next[2 * j + 1] = std::move(mid);
        }
        vals = std::move(next);
    }

    const std::size_t n = vals.size();
    s.times.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        s.times[k] = T * static_cast<double>(k) / static_cast<double>(n - 1);
    s.values = std::move(vals);
    s.increments.reserve(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
        s.increments.push_back(vec_sub(s.values[k + 1], s.values[k]));
    return s;
}

BrownianSample refine(const BrownianSample& s, int new_depth) {
    return BrownianSample::generate(s.dim, new_depth, s.T, s.seed);
}

PiecewisePath to_path(const BrownianSample& s) {
    return PiecewisePath(s.times, s.values);
}

RoughPathGrid piecewise_linear_lift(const BrownianSample& s, double p) {
    return signature(to_path(s), 2, p);
}

RoughPathGrid stratonovich_lift(const BrownianSample& s, int extra_depth, double p) {
    if (extra_depth < 0) throw std::invalid_argument("stratonovich_lift: extra_depth must be >= 0");
    if (s.depth + extra_depth > 24)
        throw std::invalid_argument("stratonovich_lift: refinement exceeds the depth bound 24");
    const BrownianSample fine = refine(s, s.depth + extra_depth);
    const std::size_t step = std::size_t{1} << extra_depth;

    RoughPathGrid X;
    X.p = p;
    X.times = s.times;
    X.base_point.assign(static_cast<std::size_t>(s.dim), 0.0);
    X.weak_geometric = true;
    X.sigs.reserve(s.times.size());
    TruncatedTensor running = TruncatedTensor::unit(s.dim, 2);
    X.sigs.push_back(running);
    for (std::size_t i = 0; i < fine.increments.size(); ++i) {
        running = mul(running, segment_signature(fine.increments[i], 2));
        if ((i + 1) % step == 0) X.sigs.push_back(running);
    }
    return X;
}

RoughPathGrid ito_lift(const RoughPathGrid& strat) {
    if (strat.level_cap() != 2) throw std::invalid_argument("ito_lift: need a level-2 lift");
    const int d = strat.dim();
    RoughPathGrid out = strat;
    out.weak_geometric = false;
    for (std::size_t k = 0; k < out.sigs.size(); ++k) {
        const double c = 0.5 * (out.times[k] - out.times.front());
        auto& l2 = out.sigs[k].level(2);
        for (int i = 0; i < d; ++i) l2[static_cast<std::size_t>(i * d + i)] -= c;
    }
    return out;
}

LevyAreaStats levy_area_stats(int num_samples, int depth, double T, std::uint64_t seed) {
    if (num_samples < 2) throw std::invalid_argument("levy_area_stats: need >= 2 samples");
    std::vector<double> areas;
    areas.reserve(static_cast<std::size_t>(num_samples));
    for (int s = 0; s < num_samples; ++s) {
        const std::uint64_t sample_seed =
            mix64(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(s + 1)));
        const BrownianSample b = BrownianSample::generate(2, depth, T, sample_seed);
        CompensatedSum acc;
        for (std::size_t k = 0; k < b.increments.size(); ++k) {
            acc.add(0.5 * (b.values[k][0] * b.increments[k][1] - b.values[k][1] * b.increments[k][0]));
        }
        areas.push_back(acc.value());
    }

    CompensatedSum mean_acc;
    for (double a : areas) mean_acc.add(a);
    const double mean = mean_acc.value() / static_cast<double>(num_samples);
    CompensatedSum m2_acc, m4_acc;
    for (double a : areas) {
        const double c = a - mean;
        m2_acc.add(c * c);
        m4_acc.add(c * c * c * c);
    }
    const double m2 = m2_acc.value() / static_cast<double>(num_samples);
    const double m4 = m4_acc.value() / static_cast<double>(num_samples);

    LevyAreaStats out;
    out.samples = num_samples;
    out.depth = depth;
    out.T = T;
    out.mean = mean;
    out.variance = m2;
    out.mean_ci3 = 3.0 * std::sqrt(m2 / static_cast<double>(num_samples));
    out.variance_ci3 = 3.0 * std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(num_samples));
    return out;
}

WongZakaiResult wong_zakai_experiment(const VectorFieldSet& F, const std::vector<double>& x0,
                                      const std::vector<int>& depths, std::uint64_t seed, double T,
                                      double tol, int ode_substeps, double p, int ref_extra_depth) {
    if (depths.empty()) throw std::invalid_argument("wong_zakai_experiment: no depths given");
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (depths[i] < 1) throw std::invalid_argument("wong_zakai_experiment: depths must be >= 1");
        if (i > 0 && depths[i] <= depths[i - 1])
            throw std::invalid_argument("wong_zakai_experiment: depths must increase");
    }
    const int ell = F.driver_dim;
    const int dmin = depths.front();
    const int dmax = depths.back();

    const BrownianSample finest = BrownianSample::generate(ell, dmax, T, seed);
    const RoughPathGrid strat = stratonovich_lift(finest, ref_extra_depth, p);

    // Output grid: the coarsest dyadic grid, shared by every depth.
    std::vector<double> coarse_times;
    const std::size_t coarse_n = (std::size_t{1} << dmin) + 1;
    coarse_times.reserve(coarse_n);
    for (std::size_t k = 0; k < coarse_n; ++k)
        coarse_times.push_back(T * static_cast<double>(k) / static_cast<double>(coarse_n - 1));

    WongZakaiResult out;
    out.depths = depths;
    out.reference = solve_path(F, strat, x0, coarse_times, tol);

    for (int n : depths) {
        const BrownianSample b = (n == dmax) ? finest : refine(finest, n);
        const std::size_t stride = std::size_t{1} << (n - dmin);
        const double h = T / std::ldexp(1.0, n);
        std::vector<double> y = x0;
        double gap = sup_gap(y, out.reference.states.front());
        for (std::size_t cell = 0; cell < b.increments.size(); ++cell) {
            const std::vector<double>& db = b.increments[cell];
            auto field = [&](const std::vector<double>& z) {
                std::vector<double> v(z.size(), 0.0);
                for (int j = 0; j < ell; ++j)
                    axpy(v, db[static_cast<std::size_t>(j)],
                         F.eval_field(F.fields[static_cast<std::size_t>(j)], z));
                if (F.drift) axpy(v, h, F.eval_field(*F.drift, z));
                return v;
            };
            // One cell advanced over unit internal time carries the full increment.
            const double hsub = 1.0 / static_cast<double>(ode_substeps);
            for (int ss = 0; ss < ode_substeps; ++ss) {
                const std::vector<double> k1 = field(y);
                std::vector<double> probe(y.size());
                for (std::size_t i = 0; i < y.size(); ++i) probe[i] = y[i] + 0.5 * hsub * k1[i];
                const std::vector<double> k2 = field(probe);
                for (std::size_t i = 0; i < y.size(); ++i) probe[i] = y[i] + 0.5 * hsub * k2[i];
                const std::vector<double> k3 = field(probe);
                for (std::size_t i = 0; i < y.size(); ++i) probe[i] = y[i] + hsub * k3[i];
                const std::vector<double> k4 = field(probe);
                for (std::size_t i = 0; i < y.size(); ++i)
                    y[i] += hsub / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                if (norm_inf(y) > 1e12)
                    throw BlowUpError("wong_zakai_experiment: ODE state left |y| <= 1e12");
            }
            if ((cell + 1) % stride == 0) {
                const std::size_t k = (cell + 1) / stride;
                gap = std::max(gap, sup_gap(y, out.reference.states[k]));
            }
        }
        out.gaps.push_back(gap);
    }
    return out;
}

RoughItoComparison rough_vs_ito_integral(
    const BrownianSample& sample,
    const std::function<std::vector<double>(const std::vector<double>&)>& G,
    const std::function<std::vector<double>(const std::vector<double>&)>& dG, int out_rows,
    int depth, double tol, bool stratonovich) {
    if (!G || !dG) throw std::invalid_argument("rough_vs_ito_integral: missing integrand");
    if (out_rows < 1) throw std::invalid_argument("rough_vs_ito_integral: out_rows must be >= 1");
    const BrownianSample b = refine(sample, depth);
    const int ell = b.dim;

    const RoughPathGrid strat = stratonovich_lift(b);
    auto ref = std::make_shared<RoughPathGrid>(stratonovich ? strat : ito_lift(strat));

    const std::size_t n = b.times.size();
    std::vector<std::vector<double>> values(n), derivs(n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = G(b.values[k]);
        if (values[k].size() != static_cast<std::size_t>(out_rows) * ell)
            throw std::invalid_argument("rough_vs_ito_integral: G must return out_rows x dim values");
        derivs[k] = dG(b.values[k]);
        if (derivs[k].size() != static_cast<std::size_t>(out_rows) * ell * ell)
            throw std::invalid_argument("rough_vs_ito_integral: dG must return (out_rows*dim) x dim values");
    }
    const ControlledPath FC(ref, std::move(values), std::move(derivs));
    const SewResult rough = rough_integral(FC, 0.0, b.T, tol);

    CompensatedVecSum riemann(static_cast<std::size_t>(out_rows));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::vector<double> M = G(b.values[k]);
        std::vector<double> term(static_cast<std::size_t>(out_rows), 0.0);
        for (int r = 0; r < out_rows; ++r) {
            double acc = 0.0;
            for (int c = 0; c < ell; ++c)
                acc += M[static_cast<std::size_t>(r * ell + c)] * b.increments[k][static_cast<std::size_t>(c)];
            term[static_cast<std::size_t>(r)] = acc;
        }
        riemann.add(term);
    }

    RoughItoComparison out;
    out.rough_value = rough.value;
    out.riemann_value = riemann.sum;
    out.converged = rough.converged;
    out.gap = sup_gap(out.rough_value, out.riemann_value);
    return out;
}

RoughPathGrid delayed_pair(const BrownianSample& sample, double eps, double p) {
    if (sample.dim != 1) throw std::invalid_argument("delayed_pair: sample must be one-dimensional");
    const double h = sample.T / std::ldexp(1.0, sample.depth);
    const long long k = std::llround(eps / h);
    if (k < 1 || std::abs(eps - static_cast<double>(k) * h) > 1e-9 * std::max(1.0, sample.T))
        throw std::invalid_argument("delayed_pair: eps must be a positive multiple of the grid step");
    if (eps > sample.T + 1e-12)
        throw std::invalid_argument("delayed_pair: eps must not exceed the horizon T");
    if (sample.depth + 1 > 24)
        throw std::invalid_argument("delayed_pair: sample depth too large to extend the horizon");

    // Same tree family on the doubled horizon at one extra depth keeps the step h.
    const BrownianSample ext =
        BrownianSample::generate(1, sample.depth + 1, 2.0 * sample.T, sample.seed);
    const std::size_t n = (std::size_t{1} << sample.depth) + 1;
    std::vector<double> times(n);
    std::vector<std::vector<double>> vals(n);
    for (std::size_t j = 0; j < n; ++j) {
        times[j] = sample.times[j];
        vals[j] = {ext.values[j][0], ext.values[j + static_cast<std::size_t>(k)][0]};
    }
    return signature(PiecewisePath(std::move(times), std::move(vals)), 2, p);
}

RoughPathGrid joint_lift(const RoughPathGrid& X, const BrownianSample& sample, int extra_depth) {
    if (X.level_cap() != 2) throw std::invalid_argument("joint_lift: X must be a level-2 lift");
    if (X.times.size() != sample.times.size())
        throw std::invalid_argument("joint_lift: X must be sampled on the Brownian grid");
    for (std::size_t i = 0; i < X.times.size(); ++i)
        if (std::abs(X.times[i] - sample.times[i]) > 1e-9)
            throw std::invalid_argument("joint_lift: X must be sampled on the Brownian grid");

    const int dx = X.dim();
    const int db = sample.dim;
    const int d = dx + db;
    const RoughPathGrid ito = ito_lift(stratonovich_lift(sample, extra_depth, X.p));

    std::vector<TruncatedTensor> cells;
    cells.reserve(X.times.size() - 1);
    for (std::size_t i = 0; i + 1 < X.times.size(); ++i) {
        const TruncatedTensor xinc = X.increment(i, i + 1);
        const TruncatedTensor binc = ito.increment(i, i + 1);
        const auto& x1 = xinc.level(1);
        const auto& xx = xinc.level(2);
        const auto& b1 = binc.level(1);
        const auto& bb = binc.level(2);
        TruncatedTensor cell(d, 2);
        cell.scalar() = 1.0;
        auto& l1 = cell.level(1);
        for (int u = 0; u < dx; ++u) l1[static_cast<std::size_t>(u)] = x1[static_cast<std::size_t>(u)];
        for (int u = 0; u < db; ++u) l1[static_cast<std::size_t>(dx + u)] = b1[static_cast<std::size_t>(u)];
        auto& l2 = cell.level(2);
        auto at = [d](int r, int c) { return static_cast<std::size_t>(r * d + c); };
        for (int r = 0; r < dx; ++r)
            for (int c = 0; c < dx; ++c) l2[at(r, c)] = xx[static_cast<std::size_t>(r * dx + c)];
        for (int r = 0; r < db; ++r)
            for (int c = 0; c < db; ++c) l2[at(dx + r, dx + c)] = bb[static_cast<std::size_t>(r * db + c)];
        // Left-point convention: the cell-level integral of X against dB
        // vanishes, and the one of B against dX follows by parts.
        for (int r = 0; r < db; ++r)
            for (int c = 0; c < dx; ++c)
                l2[at(dx + r, c)] = b1[static_cast<std::size_t>(r)] * x1[static_cast<std::size_t>(c)];
        cells.push_back(std::move(cell));
    }
    std::vector<double> base = X.base_point;
    base.insert(base.end(), static_cast<std::size_t>(db), 0.0);
    return grid_from_cells(X.p, X.times, cells, std::move(base), false);
}

}  // namespace roughpath
