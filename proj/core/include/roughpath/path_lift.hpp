#pragma once

#include <cstddef>
#include <vector>

#include "roughpath/paths.hpp"
#include "roughpath/sewing.hpp"
#include "roughpath/tensor.hpp"

namespace roughpath {

/// A p-rough path sampled on a time grid.  sigs[k] is the absolute signature
/// from times.front() to times[k] (so sigs[0] is the unit); increments between
/// grid points follow by the group operation.  base_point records the level-1
/// starting value, which the group elements cannot see.
struct RoughPathGrid {
    double p = 2.5;
    std::vector<double> times;
    std::vector<TruncatedTensor> sigs;
    std::vector<double> base_point;
    bool weak_geometric = false;

    int dim() const;
    int level_cap() const;
    std::size_t size() const { return times.size(); }

    /// Signature increment from times[i] to times[j], i <= j.
    TruncatedTensor increment(std::size_t i, std::size_t j) const;

    /// Signature increment from s to t for arbitrary s <= t inside the time
    /// horizon.  Within a grid cell the increment is interpolated along the
    /// one-parameter subgroup exp(theta * log(cell increment)), which is
    /// consistent with the group law across cell boundaries.
    TruncatedTensor increment_between(double s, double t) const;

    /// sup over grid pairs s < t of |level-k block of X_{s,t}|_2 / (t-s)^(k/p).
    double holder_norm(int level) const;
};

/// Validating constructor from per-cell increments: sigs are chained products.
RoughPathGrid grid_from_cells(double p, std::vector<double> times,
                              const std::vector<TruncatedTensor>& cells,
                              std::vector<double> base_point, bool weak_geometric);

/// Signature of a single linear segment with increment v: exp(v).
TruncatedTensor segment_signature(const std::vector<double>& v, int level_cap);

/// Canonical lift of a piecewise-linear path: per-cell exp of the increment,
/// chained.  p = 0 picks the smallest admissible value (max(2, level_cap)).
RoughPathGrid signature(const PiecewisePath& path, int level_cap, double p = 0.0);

/// Level-2 lift with cell areas computed by sewing the germ x_u (x_v - x_u);
/// warns when the empirical Holder exponent of the path is <= 1/2.
RoughPathGrid young_lift(const PiecewisePath& path, double p, double tol = 1e-9);

/// The pure-area rough path on [0,T]: level-1 part zero, level-2 part
/// pi * t * J with J the rotation by 90 degrees (J12 = 1, J21 = -1).
RoughPathGrid pure_area(double T, int steps, double p = 2.5);

/// x_n(t) = (cos(2 pi n^2 t)/n, sin(2 pi n^2 t)/n) sampled on [0,1].
PiecewisePath oscillator_path(int n, int steps);

/// Translation of a level-2 rough path by a smooth path h sampled on the same
/// grid: level 1 gains dh, level 2 gains the three cross/self Young terms.
RoughPathGrid translate(const RoughPathGrid& X, const PiecewisePath& h);

/// Joint level-2 lift of (X, h) with the cross integrals of h computed as
/// Young integrals (h smooth); the result has dimension dim(X) + dim(h).
RoughPathGrid pair_with_smooth(const RoughPathGrid& X, const PiecewisePath& h);

/// Canonical level-3 extension of a level-2 rough path: per cell, the limit
/// of products of level-2 geodesic pieces embedded with zero third level.
/// Throws when the dyadic products fail to settle within max_depth.
RoughPathGrid lyons_extend_level3(const RoughPathGrid& X, double tol = 1e-9,
                                  int max_depth = 20);

/// Inhomogeneous p-rough-path distance between two lifts on the same grid:
/// max over levels k of sup_{s<t} |X^k_{s,t} - Y^k_{s,t}|_2 / (t-s)^(k/p),
/// plus the gap between the starting points.
double distance(const RoughPathGrid& X, const RoughPathGrid& Y);

/// Free-function form of RoughPathGrid::holder_norm.
double holder_norm(const RoughPathGrid& X, int level);

}  // namespace roughpath
