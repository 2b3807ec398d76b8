#include "roughpath/path_lift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "roughpath/linalg.hpp"
#include "roughpath/warnings.hpp"

namespace roughpath {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_grid(const RoughPathGrid& X, const char* who) {
    if (X.times.size() < 2) throw std::invalid_argument(std::string(who) + ": need >= 2 grid times");
    if (X.times.size() != X.sigs.size())
        throw std::invalid_argument(std::string(who) + ": times/sigs size mismatch");
    if (!(X.p >= 2.0 && X.p < 4.0))
        throw std::invalid_argument(std::string(who) + ": p must lie in [2,4)");
}

std::vector<double> outer(const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> out(u.size() * v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out[i * v.size() + j] = u[i] * v[j];
    return out;
}

void check_same_times(const std::vector<double>& a, const std::vector<double>& b, const char* who) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(who) + ": grids have different sizes");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12)
            throw std::invalid_argument(std::string(who) + ": grids have different times");
}

}  // namespace

int RoughPathGrid::dim() const {
    if (sigs.empty()) return 0;
    return sigs.front().dim();
}

int RoughPathGrid::level_cap() const {
    if (sigs.empty()) return 0;
    return sigs.front().level_cap();
}

TruncatedTensor RoughPathGrid::increment(std::size_t i, std::size_t j) const {
    if (i > j || j >= sigs.size())
        throw std::out_of_range("RoughPathGrid::increment: need i <= j < size()");
    return mul(inverse(sigs[i]), sigs[j]);
}

TruncatedTensor RoughPathGrid::increment_between(double s, double t) const {
    check_grid(*this, "increment_between");
    if (!(s <= t)) throw std::invalid_argument("increment_between: need s <= t");
    const double lo = times.front(), hi = times.back();
    s = std::min(std::max(s, lo), hi);
    t = std::min(std::max(t, lo), hi);
    if (s == t) return TruncatedTensor::unit(dim(), level_cap());

    auto cell_of = [this](double u) -> std::size_t {
        auto it = std::upper_bound(times.begin(), times.end(), u);
        std::size_t k = static_cast<std::size_t>(it - times.begin());
        if (k == 0) return 0;
        if (k >= times.size()) return times.size() - 2;
        return k - 1;
    };
    // Geodesic piece of cell k covering [a, b] (subset of the cell).
    auto partial = [this](std::size_t k, double a, double b) {
        const double width = times[k + 1] - times[k];
        const double theta = (b - a) / width;
        const TruncatedTensor lam = log(increment(k, k + 1));
        return roughpath::exp(scale(theta, lam));
    };

    const std::size_t k0 = cell_of(s);
    const std::size_t k1 = cell_of(t);
    if (k0 == k1) return partial(k0, s, t);

    TruncatedTensor acc = partial(k0, s, times[k0 + 1]);
    for (std::size_t k = k0 + 1; k < k1; ++k) acc = mul(acc, increment(k, k + 1));
    if (t > times[k1]) acc = mul(acc, partial(k1, times[k1], t));
    return acc;
}

double RoughPathGrid::holder_norm(int level) const {
    check_grid(*this, "holder_norm");
    if (level < 1 || level > level_cap())
        throw std::invalid_argument("holder_norm: level out of range");
    const std::size_t n = times.size();
    std::vector<TruncatedTensor> invs;
    invs.reserve(n);
    for (const auto& s : sigs) invs.push_back(inverse(s));
    const double ex = static_cast<double>(level) / p;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const TruncatedTensor inc = mul(invs[i], sigs[j]);
            const double val = norm2(inc.level(level)) / std::pow(times[j] - times[i], ex);
            worst = std::max(worst, val);
        }
    return worst;
}

double holder_norm(const RoughPathGrid& X, int level) { return X.holder_norm(level); }

RoughPathGrid grid_from_cells(double p, std::vector<double> times,
                              const std::vector<TruncatedTensor>& cells,
                              std::vector<double> base_point, bool weak_geometric) {
    if (times.size() < 2) throw std::invalid_argument("grid_from_cells: need >= 2 times");
    if (cells.size() + 1 != times.size())
        throw std::invalid_argument("grid_from_cells: need one cell per grid interval");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("grid_from_cells: times must be strictly increasing");
    const int d = cells.front().dim();
    const int cap = cells.front().level_cap();
    for (const auto& c : cells)
        if (c.dim() != d || c.level_cap() != cap)
            throw std::invalid_argument("grid_from_cells: inconsistent cell shapes");
    if (base_point.empty()) base_point.assign(static_cast<std::size_t>(d), 0.0);
    if (base_point.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("grid_from_cells: base_point dimension mismatch");

    RoughPathGrid X;
    X.p = p;
    X.times = std::move(times);
    X.base_point = std::move(base_point);
    X.weak_geometric = weak_geometric;
    X.sigs.reserve(X.times.size());
    X.sigs.push_back(TruncatedTensor::unit(d, cap));
    for (const auto& c : cells) X.sigs.push_back(mul(X.sigs.back(), c));
    check_grid(X, "grid_from_cells");
    return X;
}

TruncatedTensor segment_signature(const std::vector<double>& v, int level_cap) {
    return roughpath::exp(TruncatedTensor::from_level1(v, level_cap));
}

RoughPathGrid signature(const PiecewisePath& path, int level_cap, double p) {
    if (p == 0.0) p = std::max(2.0, static_cast<double>(level_cap));
    std::vector<TruncatedTensor> cells;
    cells.reserve(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        cells.push_back(segment_signature(path.increment(i, i + 1), level_cap));
    return grid_from_cells(p, path.times, cells, path.values.front(), true);
}

RoughPathGrid young_lift(const PiecewisePath& path, double p, double tol) {
    const int d = path.dim();
    const double alpha = std::min(1.0, empirical_holder_exponent(path));
    if (!(alpha > 0.5))
        emit_warning("young_lift: empirical Holder exponent " + std::to_string(alpha) +
                     " is not above 1/2; the Young construction may not converge");
    std::vector<TruncatedTensor> cells;
    cells.reserve(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        AlmostAdditiveFunctional mu;
        mu.exponent_a = 2.0 * alpha;
        mu.evaluator = [&path](double u, double v) {
            const std::vector<double> xu = path.value_at(u);
            const std::vector<double> xv = path.value_at(v);
            return outer(xu, vec_sub(xv, xu));
        };
        const SewResult r = sew(mu, path.times[i], path.times[i + 1], tol);
        if (!r.converged)
            throw std::runtime_error("young_lift: cell sewing did not converge (last delta " +
                                     std::to_string(r.last_delta) + ")");
        const std::vector<double> dx = path.increment(i, i + 1);
        TruncatedTensor cell(d, 2);
        cell.scalar() = 1.0;
        cell.level(1) = dx;
        // Subtract x(t_i) (x) dx to turn the absolute integral into the cell area.
        const std::vector<double> shift = outer(path.values[i], dx);
        std::vector<double> area = r.value;
        for (std::size_t m = 0; m < area.size(); ++m) area[m] -= shift[m];
        cell.level(2) = area;
        cells.push_back(std::move(cell));
    }
    return grid_from_cells(p, path.times, cells, path.values.front(), true);
}

RoughPathGrid pure_area(double T, int steps, double p) {
    if (!(T > 0.0)) throw std::invalid_argument("pure_area: need T > 0");
    if (steps < 1) throw std::invalid_argument("pure_area: need steps >= 1");
    RoughPathGrid X;
    X.p = p;
    X.base_point = {0.0, 0.0};
    X.weak_geometric = true;
    X.times.reserve(static_cast<std::size_t>(steps) + 1);
    X.sigs.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        const double t = T * static_cast<double>(k) / static_cast<double>(steps);
        X.times.push_back(t);
        TruncatedTensor s = TruncatedTensor::unit(2, 2);
        s.level(2)[1] = kPi * t;    // word (1,2)
        s.level(2)[2] = -kPi * t;   // word (2,1)
        X.sigs.push_back(std::move(s));
    }
    check_grid(X, "pure_area");
    return X;
}

PiecewisePath oscillator_path(int n, int steps) {
    if (n < 1) throw std::invalid_argument("oscillator_path: need n >= 1");
    if (steps < 2) throw std::invalid_argument("oscillator_path: need steps >= 2");
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    times.reserve(static_cast<std::size_t>(steps) + 1);
    values.reserve(static_cast<std::size_t>(steps) + 1);
    const double freq = 2.0 * kPi * static_cast<double>(n) * static_cast<double>(n);
    for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps);
        times.push_back(t);
        values.push_back({std::cos(freq * t) / n, std::sin(freq * t) / n});
    }
    return PiecewisePath(std::move(times), std::move(values));
}

RoughPathGrid translate(const RoughPathGrid& X, const PiecewisePath& h) {
    check_grid(X, "translate");
    if (X.level_cap() != 2) throw std::invalid_argument("translate: level-2 lifts only");
    if (h.dim() != X.dim()) throw std::invalid_argument("translate: dimension mismatch");
    check_same_times(X.times, h.times, "translate");

    const int d = X.dim();
    std::vector<TruncatedTensor> cells;
    cells.reserve(X.times.size() - 1);
    for (std::size_t i = 0; i + 1 < X.times.size(); ++i) {
        const TruncatedTensor inc = X.increment(i, i + 1);
        const std::vector<double>& a1 = inc.level(1);
        const std::vector<double> dh = h.increment(i, i + 1);
        TruncatedTensor cell(d, 2);
        cell.scalar() = 1.0;
        cell.level(1) = vec_add(a1, dh);
        // Cross terms are Young integrals of piecewise-linear data, which on a
        // single cell reduce to half the products of the increments.
        std::vector<double> lvl2 = inc.level(2);
        const std::vector<double> adh = outer(a1, dh);
        const std::vector<double> dha = outer(dh, a1);
        const std::vector<double> dhdh = outer(dh, dh);
        for (std::size_t m = 0; m < lvl2.size(); ++m)
            lvl2[m] += 0.5 * (adh[m] + dha[m] + dhdh[m]);
        cell.level(2) = std::move(lvl2);
        cells.push_back(std::move(cell));
    }
    std::vector<double> base = vec_add(X.base_point, h.values.front());
    return grid_from_cells(X.p, X.times, cells, std::move(base), X.weak_geometric);
}

RoughPathGrid pair_with_smooth(const RoughPathGrid& X, const PiecewisePath& h) {
    check_grid(X, "pair_with_smooth");
    if (X.level_cap() != 2) throw std::invalid_argument("pair_with_smooth: level-2 lifts only");
    check_same_times(X.times, h.times, "pair_with_smooth");

    const int dx = X.dim();
    const int dh = h.dim();
    const int d = dx + dh;
    std::vector<TruncatedTensor> cells;
    cells.reserve(X.times.size() - 1);
    for (std::size_t i = 0; i + 1 < X.times.size(); ++i) {
        const TruncatedTensor inc = X.increment(i, i + 1);
        const std::vector<double>& a1 = inc.level(1);
        const std::vector<double>& a2 = inc.level(2);
        const std::vector<double> hh = h.increment(i, i + 1);
        TruncatedTensor cell(d, 2);
        cell.scalar() = 1.0;
        auto& l1 = cell.level(1);
        for (int u = 0; u < dx; ++u) l1[static_cast<std::size_t>(u)] = a1[static_cast<std::size_t>(u)];
        for (int u = 0; u < dh; ++u) l1[static_cast<std::size_t>(dx + u)] = hh[static_cast<std::size_t>(u)];
        auto& l2 = cell.level(2);
        auto at = [d](int r, int c) { return static_cast<std::size_t>(r * d + c); };
        for (int r = 0; r < dx; ++r)
            for (int c = 0; c < dx; ++c)
                l2[at(r, c)] = a2[static_cast<std::size_t>(r * dx + c)];
        // Cross and smooth-smooth areas of piecewise-linear cells.
        for (int r = 0; r < dx; ++r)
            for (int c = 0; c < dh; ++c)
                l2[at(r, dx + c)] = 0.5 * a1[static_cast<std::size_t>(r)] * hh[static_cast<std::size_t>(c)];
        for (int r = 0; r < dh; ++r)
            for (int c = 0; c < dx; ++c)
                l2[at(dx + r, c)] = 0.5 * hh[static_cast<std::size_t>(r)] * a1[static_cast<std::size_t>(c)];
        for (int r = 0; r < dh; ++r)
            for (int c = 0; c < dh; ++c)
                l2[at(dx + r, dx + c)] = 0.5 * hh[static_cast<std::size_t>(r)] * hh[static_cast<std::size_t>(c)];
        cells.push_back(std::move(cell));
    }
    std::vector<double> base = X.base_point;
    base.insert(base.end(), h.values.front().begin(), h.values.front().end());
    return grid_from_cells(X.p, X.times, cells, std::move(base), X.weak_geometric);
}

RoughPathGrid lyons_extend_level3(const RoughPathGrid& X, double tol, int max_depth) {
    check_grid(X, "lyons_extend_level3");
    if (X.level_cap() != 2)
        throw std::invalid_argument("lyons_extend_level3: input must have level cap 2");
    const int d = X.dim();

    std::vector<TruncatedTensor> cells;
    cells.reserve(X.times.size() - 1);
    for (std::size_t i = 0; i + 1 < X.times.size(); ++i) {
        const TruncatedTensor inc = X.increment(i, i + 1);
        TruncatedTensor lam3(d, 3);
        {
            const TruncatedTensor lam2 = log(inc);
            lam3.level(1) = lam2.level(1);
            lam3.level(2) = lam2.level(2);
        }
        // Product of 2^m geodesic pieces whose third level has been zeroed;
        // identical factors allow plain repeated squaring.
        std::vector<double> prev_level3;
        TruncatedTensor best(d, 3);
        bool converged = false;
        for (int m = 0; m <= max_depth; ++m) {
            TruncatedTensor piece = roughpath::exp(scale(std::ldexp(1.0, -m), lam3));
            std::fill(piece.level(3).begin(), piece.level(3).end(), 0.0);
            TruncatedTensor prod = piece;
            for (int q = 0; q < m; ++q) prod = mul(prod, prod);
            if (m > 0) {
                double delta = 0.0;
                const auto& cur = prod.level(3);
                for (std::size_t k = 0; k < cur.size(); ++k)
                    delta = std::max(delta, std::abs(cur[k] - prev_level3[k]));
                if (delta < tol) {
                    best = std::move(prod);
                    converged = true;
                    break;
                }
            }
            prev_level3 = prod.level(3);
            best = std::move(prod);
        }
        if (!converged)
            throw std::runtime_error("lyons_extend_level3: dyadic products did not settle below " +
                                     std::to_string(tol) + " within depth " + std::to_string(max_depth));
        // Levels 1 and 2 are carried over exactly from the input increment.
        best.scalar() = 1.0;
        best.level(1) = inc.level(1);
        best.level(2) = inc.level(2);
        cells.push_back(std::move(best));
    }
    return grid_from_cells(X.p, X.times, cells, X.base_point, X.weak_geometric);
}

double distance(const RoughPathGrid& X, const RoughPathGrid& Y) {
    check_grid(X, "distance");
    check_grid(Y, "distance");
    if (X.dim() != Y.dim() || X.level_cap() != Y.level_cap())
        throw std::invalid_argument("distance: shape mismatch");
    if (std::abs(X.p - Y.p) > 1e-12)
        throw std::invalid_argument("distance: lifts use different p");
    check_same_times(X.times, Y.times, "distance");

    const std::size_t n = X.times.size();
    const int cap = X.level_cap();
    std::vector<TruncatedTensor> invX, invY;
    invX.reserve(n);
    invY.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        invX.push_back(inverse(X.sigs[i]));
        invY.push_back(inverse(Y.sigs[i]));
    }
    std::vector<double> level_worst(static_cast<std::size_t>(cap), 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const TruncatedTensor ix = mul(invX[i], X.sigs[j]);
            const TruncatedTensor iy = mul(invY[i], Y.sigs[j]);
            const double dt = X.times[j] - X.times[i];
            for (int level = 1; level <= cap; ++level) {
                const auto& bx = ix.level(level);
                const auto& by = iy.level(level);
                double s = 0.0;
                for (std::size_t m = 0; m < bx.size(); ++m) {
                    const double g = bx[m] - by[m];
                    s += g * g;
                }
                const double ex = static_cast<double>(level) / X.p;
                double& w = level_worst[static_cast<std::size_t>(level - 1)];
                w = std::max(w, std::sqrt(s) / std::pow(dt, ex));
            }
        }
    double worst = 0.0;
    for (double w : level_worst) worst = std::max(worst, w);
    double base_gap = 0.0;
    if (X.base_point.size() == Y.base_point.size())
        base_gap = sup_gap(X.base_point, Y.base_point);
    else
        throw std::invalid_argument("distance: base point dimension mismatch");
    return worst + base_gap;
}

}  // namespace roughpath
