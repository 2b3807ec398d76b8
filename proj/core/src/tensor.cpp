#include "roughpath/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughpath {

namespace {

void check_same_shape(const TruncatedTensor& a, const TruncatedTensor& b, const char* op) {
    if (a.dim() != b.dim() || a.level_cap() != b.level_cap())
        throw std::invalid_argument(std::string(op) + ": operands have different dim or level_cap");
}

}  // namespace

std::size_t TruncatedTensor::block_size(int dim, int level) {
    std::size_t n = 1;
    for (int k = 0; k < level; ++k) n *= static_cast<std::size_t>(dim);
    return n;
}

TruncatedTensor::TruncatedTensor(int dim, int level_cap)
    : dim_(dim), cap_(level_cap), scalar_(0.0) {
    if (dim < 1) throw std::invalid_argument("TruncatedTensor: dim must be >= 1");
    if (level_cap < 1 || level_cap > 3)
        throw std::invalid_argument("TruncatedTensor: level_cap must be 1, 2 or 3");
    levels_.resize(static_cast<std::size_t>(cap_));
    for (int k = 1; k <= cap_; ++k)
        levels_[static_cast<std::size_t>(k - 1)].assign(block_size(dim_, k), 0.0);
}

TruncatedTensor TruncatedTensor::unit(int dim, int level_cap) {
    TruncatedTensor t(dim, level_cap);
    t.scalar_ = 1.0;
    return t;
}

TruncatedTensor TruncatedTensor::from_level1(const std::vector<double>& v, int level_cap) {
    if (v.empty()) throw std::invalid_argument("from_level1: empty vector");
    TruncatedTensor t(static_cast<int>(v.size()), level_cap);
    t.level(1) = v;
    return t;
}

const std::vector<double>& TruncatedTensor::level(int k) const {
    if (k < 1 || k > cap_) throw std::out_of_range("TruncatedTensor::level: k out of range");
    return levels_[static_cast<std::size_t>(k - 1)];
}

std::vector<double>& TruncatedTensor::level(int k) {
    if (k < 1 || k > cap_) throw std::out_of_range("TruncatedTensor::level: k out of range");
    return levels_[static_cast<std::size_t>(k - 1)];
}

TruncatedTensor add(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_same_shape(a, b, "add");
    TruncatedTensor c = a;
    c.scalar() += b.scalar();
    for (int k = 1; k <= a.level_cap(); ++k) {
        auto& out = c.level(k);
        const auto& bk = b.level(k);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += bk[i];
    }
    return c;
}

TruncatedTensor sub(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_same_shape(a, b, "sub");
    TruncatedTensor c = a;
    c.scalar() -= b.scalar();
    for (int k = 1; k <= a.level_cap(); ++k) {
        auto& out = c.level(k);
        const auto& bk = b.level(k);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bk[i];
    }
    return c;
}

TruncatedTensor scale(double c, const TruncatedTensor& a) {
    TruncatedTensor out = a;
    out.scalar() *= c;
    for (int k = 1; k <= a.level_cap(); ++k)
        for (auto& x : out.level(k)) x *= c;
    return out;
}

TruncatedTensor mul(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_same_shape(a, b, "mul");
    const int N = a.level_cap();
    TruncatedTensor c(a.dim(), N);
    c.scalar() = a.scalar() * b.scalar();
    for (int r = 1; r <= N; ++r) {
        auto& out = c.level(r);
        const auto& ar = a.level(r);
        const auto& br = b.level(r);
        for (std::size_t m = 0; m < out.size(); ++m)
            out[m] = a.scalar() * br[m] + ar[m] * b.scalar();
        for (int i = 1; i < r; ++i) {
            const auto& ai = a.level(i);
            const auto& bj = b.level(r - i);
            const std::size_t nb = bj.size();
            for (std::size_t ia = 0; ia < ai.size(); ++ia) {
                const double av = ai[ia];
                if (av == 0.0) continue;
                double* dst = out.data() + ia * nb;
                for (std::size_t ib = 0; ib < nb; ++ib) dst[ib] += av * bj[ib];
            }
        }
    }
    return c;
}

TruncatedTensor exp(const TruncatedTensor& a) {
    if (std::abs(a.scalar()) > 1e-12)
        throw std::invalid_argument("exp: scalar part must vanish");
    TruncatedTensor result = TruncatedTensor::unit(a.dim(), a.level_cap());
    TruncatedTensor pow = a;
    double factorial = 1.0;
    for (int n = 1; n <= a.level_cap(); ++n) {
        factorial *= static_cast<double>(n);
        result = add(result, scale(1.0 / factorial, pow));
        if (n < a.level_cap()) pow = mul(pow, a);
    }
    return result;
}

TruncatedTensor log(const TruncatedTensor& a) {
    if (std::abs(a.scalar() - 1.0) > 1e-6)
        throw std::invalid_argument("log: scalar part must be 1");
    TruncatedTensor x = a;
    x.scalar() = 0.0;
    TruncatedTensor result(a.dim(), a.level_cap());
    TruncatedTensor pow = x;
    double sign = 1.0;
    for (int n = 1; n <= a.level_cap(); ++n) {
        result = add(result, scale(sign / static_cast<double>(n), pow));
        if (n < a.level_cap()) pow = mul(pow, x);
        sign = -sign;
    }
    return result;
}

TruncatedTensor inverse(const TruncatedTensor& a) {
    const double s = a.scalar();
    if (std::abs(s) <= 1e-12)
        throw std::invalid_argument("inverse: scalar part must be nonzero");
    // a = s (1 + y)  =>  a^{-1} = s^{-1} sum_n (-y)^n, which terminates at level_cap.
    TruncatedTensor y = scale(1.0 / s, a);
    y.scalar() = 0.0;
    TruncatedTensor result = TruncatedTensor::unit(a.dim(), a.level_cap());
    TruncatedTensor pow = y;
    double sign = -1.0;
    for (int n = 1; n <= a.level_cap(); ++n) {
        result = add(result, scale(sign, pow));
        if (n < a.level_cap()) pow = mul(pow, y);
        sign = -sign;
    }
    return scale(1.0 / s, result);
}

TruncatedTensor dilate(double lambda, const TruncatedTensor& a) {
    TruncatedTensor out = a;
    double factor = 1.0;
    for (int k = 1; k <= a.level_cap(); ++k) {
        factor *= lambda;
        for (auto& x : out.level(k)) x *= factor;
    }
    return out;
}

TruncatedTensor bracket(const TruncatedTensor& a, const TruncatedTensor& b) {
    return sub(mul(a, b), mul(b, a));
}

std::vector<double> project(const TruncatedTensor& a, int level) {
    if (level == 0) return {a.scalar()};
    return a.level(level);
}

double homogeneous_norm(const TruncatedTensor& a) {
    if (std::abs(a.scalar() - 1.0) > 1e-9)
        throw std::invalid_argument("homogeneous_norm: scalar part must be 1");
    double total = 0.0;
    for (int k = 1; k <= a.level_cap(); ++k) {
        double s = 0.0;
        for (double x : a.level(k)) s += x * x;
        total += std::pow(std::sqrt(s), 1.0 / static_cast<double>(k));
    }
    return total;
}

double max_coeff_gap(const TruncatedTensor& a, const TruncatedTensor& b) {
    check_same_shape(a, b, "max_coeff_gap");
    double m = std::abs(a.scalar() - b.scalar());
    for (int k = 1; k <= a.level_cap(); ++k) {
        const auto& ak = a.level(k);
        const auto& bk = b.level(k);
        for (std::size_t i = 0; i < ak.size(); ++i)
            m = std::max(m, std::abs(ak[i] - bk[i]));
    }
    return m;
}

namespace {

// Right-bracketing on pure level-3 tensors: the word e_i e_j e_k is sent to
// [e_i, [e_j, e_k]] = ijk - ikj - jki + kji.
std::vector<double> right_bracketing3(const std::vector<double>& t, int d) {
    std::vector<double> out(t.size(), 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const double c = t[static_cast<std::size_t>((i * d + j) * d + k)];
                if (c == 0.0) continue;
                out[static_cast<std::size_t>((i * d + j) * d + k)] += c;
                out[static_cast<std::size_t>((i * d + k) * d + j)] -= c;
                out[static_cast<std::size_t>((j * d + k) * d + i)] -= c;
                out[static_cast<std::size_t>((k * d + j) * d + i)] += c;
            }
    return out;
}

}  // namespace

bool is_group_like(const TruncatedTensor& a, double tol) {
    const double scalar_gap = std::abs(a.scalar() - 1.0);
    if (scalar_gap > tol || scalar_gap > 1e-7) return false;
    if (a.level_cap() == 1) return true;
    TruncatedTensor lam = log(a);
    const int d = a.dim();
    const auto& l2 = lam.level(2);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (std::abs(0.5 * (l2[static_cast<std::size_t>(i * d + j)] +
                                l2[static_cast<std::size_t>(j * d + i)])) > tol)
                return false;
    if (a.level_cap() >= 3) {
        const auto& l3 = lam.level(3);
        const std::vector<double> rho = right_bracketing3(l3, d);
        // Dynkin: a level-3 tensor is a Lie element iff rho fixes it up to the factor 3.
        for (std::size_t m = 0; m < l3.size(); ++m)
            if (std::abs(rho[m] - 3.0 * l3[m]) > tol) return false;
    }
    return true;
}

}  // namespace roughpath
