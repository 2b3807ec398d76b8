#pragma once

#include <cstddef>
#include <vector>

namespace roughpath {

/// Element of the step-N truncated tensor algebra over R^dim, N in {1,2,3}.
///
/// Storage is one dense row-major block per tensor level: the level-k block
/// has dim^k entries and the word (i1,...,ik) (0-based letters) lives at flat
/// index ((i1*dim + i2)*dim + ...)*dim + ik.  The scalar (level-0) part is
/// kept separately; group elements carry scalar 1, Lie elements scalar 0.
class TruncatedTensor {
public:
    TruncatedTensor(int dim, int level_cap);

    /// Multiplicative unit: scalar 1, all blocks zero.
    static TruncatedTensor unit(int dim, int level_cap);

    /// Scalar 0, level-1 block v, higher blocks zero.
    static TruncatedTensor from_level1(const std::vector<double>& v, int level_cap);

    int dim() const noexcept { return dim_; }
    int level_cap() const noexcept { return cap_; }

    double scalar() const noexcept { return scalar_; }
    double& scalar() noexcept { return scalar_; }

    /// Level-k block, 1 <= k <= level_cap.
    const std::vector<double>& level(int k) const;
    std::vector<double>& level(int k);

    static std::size_t block_size(int dim, int level);

private:
    int dim_;
    int cap_;
    double scalar_;
    std::vector<std::vector<double>> levels_;  // levels_[k-1] holds level k
};

TruncatedTensor add(const TruncatedTensor& a, const TruncatedTensor& b);
TruncatedTensor sub(const TruncatedTensor& a, const TruncatedTensor& b);
TruncatedTensor scale(double c, const TruncatedTensor& a);

/// Truncated tensor product: words longer than level_cap are dropped.
TruncatedTensor mul(const TruncatedTensor& a, const TruncatedTensor& b);

/// exp(a) = 1 + a + a^2/2 + ... (terminates at level_cap).
/// Requires vanishing scalar part (|scalar| <= 1e-12).
TruncatedTensor exp(const TruncatedTensor& a);

/// log(a) = x - x^2/2 + x^3/3 - ... with x = a - 1.
/// Requires scalar part 1 (within 1e-6).  Inverse of exp on its domain.
TruncatedTensor log(const TruncatedTensor& a);

/// Multiplicative inverse; requires |scalar| > 1e-12.  For scalar-one
/// elements this agrees with exp(-log(a)).
TruncatedTensor inverse(const TruncatedTensor& a);

/// Dilation: multiplies the level-k block by lambda^k.
TruncatedTensor dilate(double lambda, const TruncatedTensor& a);

/// Commutator ab - ba.
TruncatedTensor bracket(const TruncatedTensor& a, const TruncatedTensor& b);

/// Copy of the level-k block; k = 0 yields {scalar}.
std::vector<double> project(const TruncatedTensor& a, int level);

/// Sum over levels k of (Euclidean norm of level-k block)^(1/k).
/// Requires scalar part 1 (within 1e-9): the element should be group-like-ish.
double homogeneous_norm(const TruncatedTensor& a);

/// max over the scalar and all block entries of |a - b|.
double max_coeff_gap(const TruncatedTensor& a, const TruncatedTensor& b);

/// True when log(a) is a Lie element up to tol in each coordinate:
/// scalar 1, symmetric part of the level-2 block within tol of zero and
/// (when level_cap = 3) the level-3 block fixed by the right-bracketing map
/// rho(e_i e_j e_k) = [e_i,[e_j,e_k]] up to the factor 3.
bool is_group_like(const TruncatedTensor& a, double tol = 1e-9);

}  // namespace roughpath
