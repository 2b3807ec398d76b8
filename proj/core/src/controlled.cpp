#include "roughpath/controlled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughpath/linalg.hpp"

namespace roughpath {

namespace {

std::vector<double> interp(const std::vector<double>& times,
                           const std::vector<std::vector<double>>& samples, double t) {
    if (t <= times.front()) return samples.front();
    if (t >= times.back()) return samples.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const std::size_t i = j - 1;
    const double theta = (t - times[i]) / (times[j] - times[i]);
    std::vector<double> out(samples[i].size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = samples[i][k] + theta * (samples[j][k] - samples[i][k]);
    return out;
}

}  // namespace

ControlledPath::ControlledPath(std::shared_ptr<const RoughPathGrid> ref,
                               std::vector<std::vector<double>> vals,
                               std::vector<std::vector<double>> derivs)
    : reference(std::move(ref)), values(std::move(vals)), derivatives(std::move(derivs)) {
    if (!reference) throw std::invalid_argument("ControlledPath: null reference");
    if (!(reference->p > 2.0 && reference->p < 3.0))
        throw std::invalid_argument("ControlledPath: reference must have 2 < p < 3");
    if (reference->level_cap() < 2)
        throw std::invalid_argument("ControlledPath: reference must carry level 2");
    const std::size_t n = reference->times.size();
    if (values.size() != n || derivatives.size() != n)
        throw std::invalid_argument("ControlledPath: values/derivatives must be sampled on the reference grid");
    const std::size_t d = values.front().size();
    if (d == 0) throw std::invalid_argument("ControlledPath: zero-dimensional values");
    const std::size_t ell = static_cast<std::size_t>(reference->dim());
    for (const auto& v : values)
        if (v.size() != d) throw std::invalid_argument("ControlledPath: inconsistent value dimension");
    for (const auto& g : derivatives)
        if (g.size() != d * ell)
            throw std::invalid_argument("ControlledPath: derivative blocks must be d x dim(reference)");
}

int ControlledPath::out_dim() const { return static_cast<int>(values.front().size()); }

std::vector<double> ControlledPath::value_at(double t) const {
    return interp(reference->times, values, t);
}

std::vector<double> ControlledPath::derivative_at(double t) const {
    return interp(reference->times, derivatives, t);
}

double remainder_norm(const ControlledPath& z) {
    const RoughPathGrid& X = *z.reference;
    const std::size_t n = X.times.size();
    const int d = z.out_dim();
    const int ell = X.dim();
    std::vector<TruncatedTensor> invs;
    invs.reserve(n);
    for (const auto& s : X.sigs) invs.push_back(inverse(s));
    const double ex = 2.0 / X.p;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const TruncatedTensor inc = mul(invs[i], X.sigs[j]);
            const auto& x1 = inc.level(1);
            double s2 = 0.0;
            for (int r = 0; r < d; ++r) {
                double rem = z.values[j][static_cast<std::size_t>(r)] - z.values[i][static_cast<std::size_t>(r)];
                for (int c = 0; c < ell; ++c)
                    rem -= z.derivatives[i][static_cast<std::size_t>(r * ell + c)] * x1[static_cast<std::size_t>(c)];
                s2 += rem * rem;
            }
            worst = std::max(worst, std::sqrt(s2) / std::pow(X.times[j] - X.times[i], ex));
        }
    return worst;
}

SewResult rough_integral(const ControlledPath& F, const RoughPathGrid& X, double s, double t,
                         double tol, int max_depth) {
    if (F.reference.get() != &X) {
        // Allow a caller-held copy as long as it matches the stored reference.
        if (X.times != F.reference->times || X.dim() != F.reference->dim() ||
            X.level_cap() != F.reference->level_cap() || std::abs(X.p - F.reference->p) > 1e-12)
            throw std::invalid_argument("rough_integral: X is not the reference of F");
    }
    return rough_integral(F, s, t, tol, max_depth);
}

SewResult rough_integral(const ControlledPath& F, double s, double t, double tol, int max_depth) {
    const RoughPathGrid& X = *F.reference;
    const int ell = X.dim();
    const int total = F.out_dim();
    if (total % ell != 0)
        throw std::invalid_argument("rough_integral: out_dim must be a multiple of dim(reference)");
    const int n = total / ell;

    AlmostAdditiveFunctional mu;
    mu.exponent_a = 3.0 / X.p;
    mu.evaluator = [&F, &X, ell, n](double u, double v) {
        const TruncatedTensor inc = X.increment_between(u, v);
        const auto& x1 = inc.level(1);
        const auto& xx = inc.level(2);
        const std::vector<double> Fv = F.value_at(u);
        const std::vector<double> Fd = F.derivative_at(u);
        std::vector<double> out(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int c = 0; c < ell; ++c)
                acc += Fv[static_cast<std::size_t>(i * ell + c)] * x1[static_cast<std::size_t>(c)];
            // Second-order term: sum_{k,j} dF_{ik}/dx_j XX^{jk}.
            for (int k = 0; k < ell; ++k)
                for (int j = 0; j < ell; ++j)
                    acc += Fd[static_cast<std::size_t>((i * ell + k) * ell + j)] *
                           xx[static_cast<std::size_t>(j * ell + k)];
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    };
    return sew(mu, s, t, tol, max_depth);
}

RoughPathGrid self_lift(const ControlledPath& z, double tol) {
    const RoughPathGrid& X = *z.reference;
    const int d = z.out_dim();
    const int ell = X.dim();
    const std::size_t n = X.times.size();

    std::vector<TruncatedTensor> cells;
    cells.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        AlmostAdditiveFunctional mu;
        mu.exponent_a = 3.0 / X.p;
        mu.evaluator = [&z, &X, d, ell](double u, double v) {
            const std::vector<double> zu = z.value_at(u);
            const std::vector<double> zv = z.value_at(v);
            const std::vector<double> gu = z.derivative_at(u);
            const TruncatedTensor inc = X.increment_between(u, v);
            const auto& xx = inc.level(2);
            std::vector<double> out(static_cast<std::size_t>(d) * d, 0.0);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double acc = zu[static_cast<std::size_t>(a)] *
                                 (zv[static_cast<std::size_t>(b)] - zu[static_cast<std::size_t>(b)]);
                    for (int k = 0; k < ell; ++k)
                        for (int l = 0; l < ell; ++l)
                            acc += gu[static_cast<std::size_t>(a * ell + k)] *
                                   gu[static_cast<std::size_t>(b * ell + l)] *
                                   xx[static_cast<std::size_t>(k * ell + l)];
                    out[static_cast<std::size_t>(a * d + b)] = acc;
                }
            return out;
        };
        const SewResult r = sew(mu, X.times[i], X.times[i + 1], tol);
        if (!r.converged)
            throw std::runtime_error("self_lift: cell sewing did not converge (last delta " +
                                     std::to_string(r.last_delta) + ")");
        const std::vector<double> dz = vec_sub(z.values[i + 1], z.values[i]);
        TruncatedTensor cell(d, 2);
        cell.scalar() = 1.0;
        cell.level(1) = dz;
        std::vector<double> area = r.value;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                area[static_cast<std::size_t>(a * d + b)] -=
                    z.values[i][static_cast<std::size_t>(a)] * dz[static_cast<std::size_t>(b)];
        cell.level(2) = std::move(area);
        cells.push_back(std::move(cell));
    }
    RoughPathGrid out = grid_from_cells(X.p, X.times, cells, z.values.front(), false);
    bool geo = true;
    for (const auto& s : out.sigs)
        if (!is_group_like(s, 1e-8)) { geo = false; break; }
    out.weak_geometric = geo;
    return out;
}

ControlledPath compose_map(const ControlledPath& z,
                           const std::function<std::vector<double>(const std::vector<double>&)>& phi,
                           const std::function<std::vector<double>(const std::vector<double>&)>& dphi,
                           int out_dim) {
    if (!phi || !dphi) throw std::invalid_argument("compose_map: missing map or derivative");
    const int d = z.out_dim();
    const int ell = z.reference->dim();
    std::vector<std::vector<double>> vals, derivs;
    vals.reserve(z.values.size());
    derivs.reserve(z.values.size());
    for (std::size_t i = 0; i < z.values.size(); ++i) {
        std::vector<double> v = phi(z.values[i]);
        if (v.size() != static_cast<std::size_t>(out_dim))
            throw std::invalid_argument("compose_map: phi returned wrong dimension");
        std::vector<double> J = dphi(z.values[i]);  // out_dim x d
        if (J.size() != static_cast<std::size_t>(out_dim) * d)
            throw std::invalid_argument("compose_map: dphi returned wrong shape");
        std::vector<double> g(static_cast<std::size_t>(out_dim) * ell, 0.0);
        for (int r = 0; r < out_dim; ++r)
            for (int c = 0; c < ell; ++c) {
                double acc = 0.0;
                for (int m = 0; m < d; ++m)
                    acc += J[static_cast<std::size_t>(r * d + m)] *
                           z.derivatives[i][static_cast<std::size_t>(m * ell + c)];
                g[static_cast<std::size_t>(r * ell + c)] = acc;
            }
        vals.push_back(std::move(v));
        derivs.push_back(std::move(g));
    }
    return ControlledPath(z.reference, std::move(vals), std::move(derivs));
}

}  // namespace roughpath
