#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "roughpath/path_lift.hpp"
#include "roughpath/sewing.hpp"

namespace roughpath {

/// Path z in R^d controlled by a reference rough path X with 2 < p < 3:
/// z_t - z_s = Z'_s X^1_{s,t} + O(|t-s|^{2/p}).  Values and the Gubinelli
/// derivative Z' (row-major d x dim(X)) are sampled on the reference grid and
/// interpolated linearly in between.
struct ControlledPath {
    std::shared_ptr<const RoughPathGrid> reference;
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> derivatives;

    ControlledPath(std::shared_ptr<const RoughPathGrid> ref,
                   std::vector<std::vector<double>> vals,
                   std::vector<std::vector<double>> derivs);

    int out_dim() const;
    std::vector<double> value_at(double t) const;
    std::vector<double> derivative_at(double t) const;
};

/// sup over grid pairs of |z_{s,t} - Z'_s X^1_{s,t}|_2 / (t-s)^(2/p).
double remainder_norm(const ControlledPath& z);

/// Rough integral of a controlled path F with values in L(R^ell, R^n)
/// (row-major n x ell, so out_dim = n*ell; the derivative index comes last)
/// against its reference X: the sewing limit of
/// mu(u,v) = F_u X^1_{u,v} + F'_u XX_{u,v}.  X must be the reference of F.
SewResult rough_integral(const ControlledPath& F, const RoughPathGrid& X, double s, double t,
                         double tol = 1e-9, int max_depth = 22);

/// Same, using F's stored reference.
SewResult rough_integral(const ControlledPath& F, double s, double t,
                         double tol = 1e-9, int max_depth = 22);

/// Level-2 lift of a controlled path: cell areas are sewing limits of
/// z_u (x) dz with the second-order part reconstructed from Z' and XX.
/// The geometricity flag of the result is computed, not assumed.
RoughPathGrid self_lift(const ControlledPath& z, double tol = 1e-9);

/// Composition with a C^2 map phi: values phi(z), derivative Dphi(z) Z'.
/// phi maps R^d -> R^m (m = out_dim); dphi returns row-major m x d.
ControlledPath compose_map(const ControlledPath& z,
                           const std::function<std::vector<double>(const std::vector<double>&)>& phi,
                           const std::function<std::vector<double>(const std::vector<double>&)>& dphi,
                           int out_dim);

}  // namespace roughpath
