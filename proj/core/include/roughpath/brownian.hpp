#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "roughpath/path_lift.hpp"
#include "roughpath/paths.hpp"
#include "roughpath/rde.hpp"
#include "roughpath/vector_field.hpp"

namespace roughpath {

/// Brownian sample on [0,T] at dyadic depth n (2^n uniform steps), built by
/// midpoint bridging from a counter-based generator keyed on
/// (seed, level, node, coordinate).  Regenerating at a finer depth reproduces
/// the coarse values exactly, and equal seeds give equal samples everywhere.
struct BrownianSample {
    int dim = 1;
    int depth = 10;
    double T = 1.0;
    std::uint64_t seed = 1;
    std::vector<double> times;                    // 2^depth + 1 uniform samples
    std::vector<std::vector<double>> values;      // values[0] = 0
    std::vector<std::vector<double>> increments;  // one per step

    static BrownianSample generate(int dim, int depth, double T, std::uint64_t seed);
};

/// Same bridge tree at a different dyadic depth.
BrownianSample refine(const BrownianSample& s, int new_depth);

PiecewisePath to_path(const BrownianSample& s);

/// Level-2 lift of the piecewise-linear interpolation on the sample grid.
RoughPathGrid piecewise_linear_lift(const BrownianSample& s, double p = 2.5);

/// Stratonovich-type lift: areas accumulated from the same bridge tree at
/// depth + extra_depth and restricted to the sample grid.  Weak-geometric.
RoughPathGrid stratonovich_lift(const BrownianSample& s, int extra_depth = 6, double p = 2.5);

/// Ito-type lift from a Stratonovich one: subtracts (t - t0)/2 Id from the
/// level-2 part of every absolute signature (so every increment loses
/// (t-s)/2 Id).  Not weak-geometric.
RoughPathGrid ito_lift(const RoughPathGrid& strat);

struct LevyAreaStats {
    int samples = 0;
    int depth = 0;
    double T = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double mean_ci3 = 0.0;      // 3-sigma half-width for the mean estimate
    double variance_ci3 = 0.0;  // 3-sigma half-width for the variance estimate
};

/// Monte-Carlo statistics of the planar Levy area at time T on a depth-n grid
/// (the discrete area of the piecewise-linear interpolation).
LevyAreaStats levy_area_stats(int num_samples, int depth, double T, std::uint64_t seed);

struct WongZakaiResult {
    std::vector<int> depths;
    std::vector<double> gaps;  // sup over the coarse grid of |ODE state - RDE state|
    Trajectory reference;      // RDE solution driven by the finest Stratonovich lift
};

/// For each depth n, solve the ODE driven by the piecewise-linear
/// interpolation of the same Brownian tree at depth n and compare with the
/// RDE solution driven by the Stratonovich lift at the maximal depth.
WongZakaiResult wong_zakai_experiment(const VectorFieldSet& F, const std::vector<double>& x0,
                                      const std::vector<int>& depths, std::uint64_t seed, double T,
                                      double tol = 1e-6, int ode_substeps = 8, double p = 2.5,
                                      int ref_extra_depth = 6);

struct RoughItoComparison {
    std::vector<double> rough_value;
    std::vector<double> riemann_value;
    double gap = 0.0;
    bool converged = true;
};

/// Rough integral of the controlled path G(B) against the Ito (default) or
/// Stratonovich lift at the given depth, next to the left-point Riemann sum
/// on the same grid.  G maps R^ell to out_rows x ell matrices (row-major);
/// dG returns the (out_rows*ell) x ell derivative with the new index last.
RoughItoComparison rough_vs_ito_integral(
    const BrownianSample& sample,
    const std::function<std::vector<double>(const std::vector<double>&)>& G,
    const std::function<std::vector<double>(const std::vector<double>&)>& dG, int out_rows,
    int depth, double tol = 1e-8, bool stratonovich = false);

/// Signature lift of t -> (B_{t}, B_{t+eps}) on [0,T], built from the same
/// bridge tree extended to [0,2T] at one extra depth (so the grid step is
/// unchanged).  eps must be a positive multiple of the grid step, at most T.
RoughPathGrid delayed_pair(const BrownianSample& sample, double eps, double p = 2.5);

/// Joint level-2 lift of a level-2 rough path X (sampled on the Brownian
/// grid) with an Ito Brownian motion: X-blocks from X, B-blocks from the Ito
/// lift, the B-against-dX block by parts from left-point sums, and the
/// X-against-dB block zero at cell level (left-point convention).
RoughPathGrid joint_lift(const RoughPathGrid& X, const BrownianSample& sample,
                         int extra_depth = 6);

}  // namespace roughpath
