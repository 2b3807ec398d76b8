#include "roughpath/rde.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "roughpath/controlled.hpp"
#include "roughpath/linalg.hpp"

namespace roughpath {

namespace {

constexpr double kBlowUpBound = 1e12;

template <typename Field>
std::vector<double> rk4_unit_time(const Field& f, std::vector<double> y, int substeps) {
    if (substeps < 1) throw std::invalid_argument("rk4: need >= 1 substep");
    const double h = 1.0 / static_cast<double>(substeps);
    const std::size_t d = y.size();
    std::vector<double> probe(d);
    for (int s = 0; s < substeps; ++s) {
        const std::vector<double> k1 = f(y);
        for (std::size_t i = 0; i < d; ++i) probe[i] = y[i] + 0.5 * h * k1[i];
        const std::vector<double> k2 = f(probe);
        for (std::size_t i = 0; i < d; ++i) probe[i] = y[i] + 0.5 * h * k2[i];
        const std::vector<double> k3 = f(probe);
        for (std::size_t i = 0; i < d; ++i) probe[i] = y[i] + h * k3[i];
        const std::vector<double> k4 = f(probe);
        for (std::size_t i = 0; i < d; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (norm_inf(y) > kBlowUpBound)
            throw BlowUpError("solver state left the ball |y| <= 1e12");
    }
    return y;
}

struct Level3Basis {
    std::vector<std::vector<int>> words;
    std::vector<std::vector<double>> columns;  // level-3 blocks of the bracket tensors
    std::vector<double> chol;                  // lower Cholesky factor of the Gram matrix
};

// Solve G c = rhs with the cached lower-triangular factor L (G = L L^T).
std::vector<double> cholesky_solve(const std::vector<double>& L, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = rhs[i];
        for (std::size_t j = 0; j < i; ++j) acc -= L[i * n + j] * rhs[j];
        rhs[i] = acc / L[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = rhs[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= L[j * n + ii] * rhs[j];
        rhs[ii] = acc / L[ii * n + ii];
    }
    return rhs;
}

const Level3Basis& level3_basis(int dim) {
    static std::map<int, Level3Basis> cache;
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;

    Level3Basis basis;
    basis.words = lyndon_words(dim, 3, 3);
    const std::size_t n = basis.words.size();
    basis.columns.reserve(n);
    for (const auto& w : basis.words)
        basis.columns.push_back(bracket_word_tensor(w, dim, 3).level(3));
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            double s = 0.0;
            for (std::size_t m = 0; m < basis.columns[a].size(); ++m)
                s += basis.columns[a][m] * basis.columns[b][m];
            gram[a * n + b] = s;
            gram[b * n + a] = s;
        }
    // Lower Cholesky; the Gram matrix of a basis is positive definite.
    std::vector<double> L(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = gram[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::logic_error("lie_coordinates: bracket Gram matrix not positive definite");
                L[i * n + i] = std::sqrt(s);
            } else {
                L[i * n + j] = s / L[j * n + j];
            }
        }
    }
    basis.chol = std::move(L);
    return cache.emplace(dim, std::move(basis)).first->second;
}

}  // namespace

TruncatedTensor bracket_word_tensor(const std::vector<int>& word, int dim, int level_cap) {
    if (word.empty()) throw std::invalid_argument("bracket_word_tensor: empty word");
    for (int c : word)
        if (c < 0 || c >= dim) throw std::invalid_argument("bracket_word_tensor: letter out of range");
    if (word.size() == 1) {
        std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
        e[static_cast<std::size_t>(word[0])] = 1.0;
        return TruncatedTensor::from_level1(e, level_cap);
    }
    const std::size_t split = standard_factorization_split(word);
    const std::vector<int> u(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(split));
    const std::vector<int> v(word.begin() + static_cast<std::ptrdiff_t>(split), word.end());
    return bracket(bracket_word_tensor(u, dim, level_cap), bracket_word_tensor(v, dim, level_cap));
}

LieCoordinates lie_coordinates(const TruncatedTensor& lambda) {
    if (std::abs(lambda.scalar()) > 1e-12)
        throw std::invalid_argument("lie_coordinates: scalar part must vanish");
    const int d = lambda.dim();
    LieCoordinates out;
    out.level1 = lambda.level(1);

    if (lambda.level_cap() >= 2) {
        const auto& l2 = lambda.level(2);
        double sym_res = 0.0;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const double s = 0.5 * (l2[static_cast<std::size_t>(j * d + k)] +
                                        l2[static_cast<std::size_t>(k * d + j)]);
                sym_res = std::max(sym_res, std::abs(s));
                if (j < k)
                    out.words[{j, k}] = 0.5 * (l2[static_cast<std::size_t>(j * d + k)] -
                                               l2[static_cast<std::size_t>(k * d + j)]);
            }
        out.residual = std::max(out.residual, sym_res);
    }

    if (lambda.level_cap() >= 3) {
        const auto& target = lambda.level(3);
        double top = 0.0;
        for (double v : target) top = std::max(top, std::abs(v));
        const Level3Basis& basis = level3_basis(d);
        if (basis.words.empty()) {
            out.residual = std::max(out.residual, top);
        } else if (top == 0.0) {
            for (const auto& w : basis.words) out.words[w] = 0.0;
        } else {
            std::vector<double> rhs(basis.words.size(), 0.0);
            for (std::size_t a = 0; a < basis.words.size(); ++a) {
                double s = 0.0;
                for (std::size_t m = 0; m < target.size(); ++m)
                    s += basis.columns[a][m] * target[m];
                rhs[a] = s;
            }
            const std::vector<double> coeffs = cholesky_solve(basis.chol, std::move(rhs));
            std::vector<double> recon(target.size(), 0.0);
            for (std::size_t a = 0; a < coeffs.size(); ++a) {
                out.words[basis.words[a]] = coeffs[a];
                for (std::size_t m = 0; m < recon.size(); ++m)
                    recon[m] += coeffs[a] * basis.columns[a][m];
            }
            double res = 0.0;
            for (std::size_t m = 0; m < recon.size(); ++m)
                res = std::max(res, std::abs(recon[m] - target[m]));
            out.residual = std::max(out.residual, res);
        }
    }
    return out;
}

std::vector<double> milstein_step(const VectorFieldSet& F, const TruncatedTensor& Xts, double s,
                                  double t, const std::vector<double>& x, int ode_substeps) {
    if (Xts.dim() != F.driver_dim)
        throw std::invalid_argument("milstein_step: increment dimension differs from driver_dim");
    if (Xts.level_cap() < 2)
        throw std::invalid_argument("milstein_step: increment must carry level 2");
    if (x.size() != static_cast<std::size_t>(F.state_dim))
        throw std::invalid_argument("milstein_step: state dimension mismatch");

    const int ell = F.driver_dim;
    const auto& x1 = Xts.level(1);
    const auto& xx = Xts.level(2);

    std::map<std::pair<int, int>, double> anti;
    for (int j = 0; j < ell; ++j)
        for (int k = j + 1; k < ell; ++k)
            anti[{j, k}] = 0.5 * (xx[static_cast<std::size_t>(j * ell + k)] -
                                  xx[static_cast<std::size_t>(k * ell + j)]);

    std::vector<double> S(static_cast<std::size_t>(ell) * ell, 0.0);
    double s_max = 0.0;
    for (int j = 0; j < ell; ++j)
        for (int k = 0; k < ell; ++k) {
            const double v = 0.5 * (xx[static_cast<std::size_t>(j * ell + k)] +
                                    xx[static_cast<std::size_t>(k * ell + j)]) -
                             0.5 * x1[static_cast<std::size_t>(j)] * x1[static_cast<std::size_t>(k)];
            S[static_cast<std::size_t>(j * ell + k)] = v;
            s_max = std::max(s_max, std::abs(v));
        }
    const bool sym_active = s_max > 1e-14;
    const double dt = t - s;

    auto field = [&](const std::vector<double>& y) {
        std::vector<double> out(y.size(), 0.0);
        if (F.drift) {
            const std::vector<double> v0 = F.eval_field(*F.drift, y);
            axpy(out, dt, v0);
        }
        for (int j = 0; j < ell; ++j) {
            const double c = x1[static_cast<std::size_t>(j)];
            if (c == 0.0) continue;
            axpy(out, c, F.eval_field(F.fields[static_cast<std::size_t>(j)], y));
        }
        for (const auto& [jk, c] : anti) {
            if (c == 0.0) continue;
            axpy(out, c, F.eval_field(F.bracket_field({jk.first, jk.second}), y));
        }
        if (sym_active) {
            for (int j = 0; j < ell; ++j)
                for (int k = 0; k < ell; ++k) {
                    const double c = S[static_cast<std::size_t>(j * ell + k)];
                    if (std::abs(c) <= 1e-16) continue;
                    axpy(out, c, F.eval_field(F.jets[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)], y));
                }
        }
        return out;
    };
    return rk4_unit_time(field, x, ode_substeps);
}

std::vector<double> log_ode_step(const VectorFieldSet& F, const TruncatedTensor& lambda,
                                 const std::vector<double>& x, int ode_substeps, double dt,
                                 double lie_tol) {
    if (lambda.dim() != F.driver_dim)
        throw std::invalid_argument("log_ode_step: increment dimension differs from driver_dim");
    if (x.size() != static_cast<std::size_t>(F.state_dim))
        throw std::invalid_argument("log_ode_step: state dimension mismatch");
    const LieCoordinates lc = lie_coordinates(lambda);
    if (lc.residual > lie_tol)
        throw std::invalid_argument("log_ode_step: increment logarithm is not a Lie element (residual " +
                                    std::to_string(lc.residual) + ")");
    auto field = [&](const std::vector<double>& y) {
        std::vector<double> out(y.size(), 0.0);
        if (F.drift && dt != 0.0) axpy(out, dt, F.eval_field(*F.drift, y));
        for (int j = 0; j < F.driver_dim; ++j) {
            const double c = lc.level1[static_cast<std::size_t>(j)];
            if (c == 0.0) continue;
            axpy(out, c, F.eval_field(F.fields[static_cast<std::size_t>(j)], y));
        }
        for (const auto& [word, c] : lc.words) {
            if (c == 0.0) continue;
            axpy(out, c, F.eval_field(F.bracket_field(word), y));
        }
        return out;
    };
    return rk4_unit_time(field, x, ode_substeps);
}

ApproxFlowGenerator rde_generator(const VectorFieldSet& F, const RoughPathGrid& driver,
                                  Scheme scheme, int ode_substeps, bool reversed) {
    if (F.driver_dim != driver.dim())
        throw std::invalid_argument("rde_generator: driver dimension differs from the field count");
    Scheme actual = scheme;
    if (actual == Scheme::automatic)
        actual = driver.level_cap() >= 3 ? Scheme::log_ode : Scheme::milstein;
    if (actual != Scheme::euler && driver.level_cap() < 2)
        throw std::invalid_argument("rde_generator: second-order schemes need a level-2 driver");
    if (actual == Scheme::log_ode && driver.level_cap() == 3) {
        const auto w = lyndon_words(driver.dim(), 3, 3);
        (void)w;  // level-3 bracket fields exist for bracket_depth 3 (the default)
    }

    const double t0 = driver.times.front();
    const double T = driver.times.back();

    ApproxFlowGenerator gen;
    gen.exponent_a = static_cast<double>(driver.level_cap() + 1) / driver.p;
    gen.map = [&F, &driver, actual, ode_substeps, reversed, t0, T](
                  double s, double t, const std::vector<double>& x) -> std::vector<double> {
        if (!(t >= s)) throw std::invalid_argument("rde generator: need s <= t");
        if (t == s) return x;
        TruncatedTensor inc = reversed
                                  ? inverse(driver.increment_between(t0 + T - t, t0 + T - s))
                                  : driver.increment_between(s, t);
        switch (actual) {
            case Scheme::euler: {
                std::vector<double> y = x;
                const auto& x1 = inc.level(1);
                for (int j = 0; j < F.driver_dim; ++j)
                    axpy(y, x1[static_cast<std::size_t>(j)],
                         F.eval_field(F.fields[static_cast<std::size_t>(j)], x));
                if (F.drift) axpy(y, t - s, F.eval_field(*F.drift, x));
                if (norm_inf(y) > kBlowUpBound)
                    throw BlowUpError("solver state left the ball |y| <= 1e12");
                return y;
            }
            case Scheme::milstein:
                return milstein_step(F, inc, s, t, x, ode_substeps);
            case Scheme::log_ode:
            default:
                return log_ode_step(F, log(inc), x, ode_substeps, t - s);
        }
    };
    return gen;
}

FlowEvaluation solve_flow(const VectorFieldSet& F, const RoughPathGrid& driver, double s, double t,
                          const std::vector<double>& x0, double tol, Scheme scheme,
                          int ode_substeps, int max_depth) {
    const ApproxFlowGenerator gen = rde_generator(F, driver, scheme, ode_substeps);
    return flow_eval(gen, s, t, x0, tol, max_depth);
}

Trajectory solve_path(const VectorFieldSet& F, const RoughPathGrid& driver,
                      const std::vector<double>& x0, std::vector<double> output_times, double tol,
                      Scheme scheme, int ode_substeps, int max_depth) {
    if (output_times.empty()) output_times = driver.times;
    const double t0 = driver.times.front();
    const double T = driver.times.back();
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        if (output_times[i] < t0 - 1e-12 || output_times[i] > T + 1e-12)
            throw std::invalid_argument("solve_path: output time outside the driver horizon");
        if (i > 0 && !(output_times[i] > output_times[i - 1]))
            throw std::invalid_argument("solve_path: output times must be strictly increasing");
    }
    const ApproxFlowGenerator gen = rde_generator(F, driver, scheme, ode_substeps);

    Trajectory tr;
    tr.times = output_times;
    tr.states.reserve(output_times.size());
    std::vector<double> x = x0;
    double cur = t0;
    for (double tk : output_times) {
        if (tk > cur + 1e-14) {
            const FlowEvaluation fe = flow_eval(gen, cur, tk, x, tol, max_depth);
            x = fe.value;
            tr.converged = tr.converged && fe.converged;
            tr.worst_delta = std::max(tr.worst_delta, fe.last_delta);
            cur = tk;
        }
        tr.states.push_back(x);
    }
    return tr;
}

double integral_residual(const Trajectory& z, const std::vector<std::vector<double>>& derivatives,
                         const VectorFieldSet& F, const RoughPathGrid& driver, double tol) {
    const std::size_t n = driver.times.size();
    if (z.times.size() != n || z.states.size() != n)
        throw std::invalid_argument("integral_residual: trajectory must be sampled on the driver grid");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(z.times[i] - driver.times[i]) > 1e-12)
            throw std::invalid_argument("integral_residual: trajectory times differ from the driver grid");
    if (derivatives.size() != n)
        throw std::invalid_argument("integral_residual: need one derivative block per grid time");

    const int d = F.state_dim;
    const int ell = F.driver_dim;

    // Symbolic partials of every field component, evaluated along z.
    std::vector<std::vector<std::vector<Expr>>> partials(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) {
        partials[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(d));
        for (int r = 0; r < d; ++r) {
            partials[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)].reserve(static_cast<std::size_t>(d));
            for (int m = 0; m < d; ++m)
                partials[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)].push_back(
                    differentiate(F.fields[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)], m));
        }
    }

    auto ref = std::make_shared<RoughPathGrid>(driver);
    std::vector<std::vector<double>> values(n), derivs(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::vector<double>& y = z.states[k];
        const std::vector<double>& zp = derivatives[k];
        if (zp.size() != static_cast<std::size_t>(d) * ell)
            throw std::invalid_argument("integral_residual: derivative blocks must be d x ell");
        std::vector<double> val(static_cast<std::size_t>(d) * ell, 0.0);
        for (int i = 0; i < ell; ++i) {
            const std::vector<double> vi = F.eval_field(F.fields[static_cast<std::size_t>(i)], y);
            for (int r = 0; r < d; ++r) val[static_cast<std::size_t>(r * ell + i)] = vi[static_cast<std::size_t>(r)];
        }
        std::vector<double> der(static_cast<std::size_t>(d) * ell * ell, 0.0);
        for (int r = 0; r < d; ++r)
            for (int i = 0; i < ell; ++i)
                for (int j = 0; j < ell; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < d; ++m)
                        acc += eval(partials[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)][static_cast<std::size_t>(m)], y) *
                               zp[static_cast<std::size_t>(m * ell + j)];
                    der[static_cast<std::size_t>((r * ell + i) * ell + j)] = acc;
                }
        values[k] = std::move(val);
        derivs[k] = std::move(der);
    }
    const ControlledPath FC(ref, std::move(values), std::move(derivs));

    double worst = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const SewResult I = rough_integral(FC, driver.times.front(), driver.times[k], tol);
        double gap = 0.0;
        for (int r = 0; r < d; ++r)
            gap = std::max(gap, std::abs(z.states[k][static_cast<std::size_t>(r)] -
                                         z.states[0][static_cast<std::size_t>(r)] -
                                         I.value[static_cast<std::size_t>(r)]));
        worst = std::max(worst, gap);
    }
    return worst;
}

RoughPathGrid perturbed_driver(const RoughPathGrid& X, const TruncatedTensor& a) {
    if (a.dim() != X.dim() || a.level_cap() != X.level_cap())
        throw std::invalid_argument("perturbed_driver: perturbation shape mismatch");
    if (std::abs(a.scalar()) > 1e-12)
        throw std::invalid_argument("perturbed_driver: perturbation must have zero scalar part");
    for (int k = 1; k < a.level_cap(); ++k)
        for (double v : a.level(k))
            if (std::abs(v) > 1e-14)
                throw std::invalid_argument("perturbed_driver: perturbation must be concentrated at the top level");

    std::vector<TruncatedTensor> cells;
    cells.reserve(X.times.size() - 1);
    for (std::size_t i = 0; i + 1 < X.times.size(); ++i) {
        const double dt = X.times[i + 1] - X.times[i];
        const TruncatedTensor lam = log(X.increment(i, i + 1));
        cells.push_back(roughpath::exp(add(lam, scale(dt, a))));
    }
    RoughPathGrid out = grid_from_cells(X.p, X.times, cells, X.base_point, false);
    bool geo = true;
    for (const auto& s : out.sigs)
        if (!is_group_like(s, 1e-8)) { geo = false; break; }
    out.weak_geometric = geo;
    return out;
}

}  // namespace roughpath
