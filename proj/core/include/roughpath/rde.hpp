#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "roughpath/flows.hpp"
#include "roughpath/path_lift.hpp"
#include "roughpath/tensor.hpp"
#include "roughpath/vector_field.hpp"

namespace roughpath {

/// Thrown when a solver state leaves the ball |y|_inf <= 1e12.
struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coordinates of a candidate Lie element in the Lyndon bracket basis:
/// level 1 on the letters, higher levels on bracket words.  residual is the
/// sup-norm gap between the input and its reconstruction from the basis;
/// a genuine Lie element has residual at rounding scale.
struct LieCoordinates {
    std::vector<double> level1;
    std::map<std::vector<int>, double> words;
    double residual = 0.0;
};

/// The tensor of a bracket word: length 1 gives e_i, longer (Lyndon) words
/// are nested commutators via the standard factorization.
TruncatedTensor bracket_word_tensor(const std::vector<int>& word, int dim, int level_cap);

/// Decompose a candidate Lie element level by level: the level-2 block onto
/// [e_j,e_k] (j<k) directly, the level-3 block onto Lyndon bracket tensors by
/// least squares.  Requires vanishing scalar part.
LieCoordinates lie_coordinates(const TruncatedTensor& lambda);

/// Second-order one-step map: time-1 flow (via RK4 with ode_substeps) of
///   (t-s) V_0 + sum_i X^i V_i + sum_{j<k} b_{jk} [V_j,V_k]
///   + sum_{j,k} S_{jk} (V_j . grad) V_k,
/// where b is the antisymmetric part of the level-2 block and
/// S = sym(XX) - X^1 (x) X^1 / 2 is its symmetric defect (zero for
/// weak-geometric increments, -(t-s)/2 Id for standard non-geometric
/// Brownian ones, which is how the solver sees the drift correction).
std::vector<double> milstein_step(const VectorFieldSet& F, const TruncatedTensor& Xts,
                                  double s, double t, const std::vector<double>& x,
                                  int ode_substeps = 8);

/// Log-coordinate one-step map: time-1 flow of the field assembled from the
/// Lie coordinates of lambda (= log of the driver increment) against the
/// bracket fields, plus dt times the drift.  Rejects inputs whose
/// coordinates leave a residual above lie_tol.
std::vector<double> log_ode_step(const VectorFieldSet& F, const TruncatedTensor& lambda,
                                 const std::vector<double>& x, int ode_substeps = 8,
                                 double dt = 0.0, double lie_tol = 1e-8);

enum class Scheme { automatic, euler, milstein, log_ode };

/// One-step approximate flow for the differential equation dy = V(y) dX
/// (+ V_0(y) dt):  automatic picks milstein for level-2 drivers and the
/// log-ODE map for level-3 ones.  With reversed = true the generator drives
/// the time-reversed equation (used for inverse flows).  The returned
/// generator holds references to F and driver; both must outlive it.
ApproxFlowGenerator rde_generator(const VectorFieldSet& F, const RoughPathGrid& driver,
                                  Scheme scheme = Scheme::automatic, int ode_substeps = 8,
                                  bool reversed = false);

/// Flow map of the equation over [s,t] via dyadic refinement of the one-step maps.
FlowEvaluation solve_flow(const VectorFieldSet& F, const RoughPathGrid& driver, double s,
                          double t, const std::vector<double>& x0, double tol = 1e-9,
                          Scheme scheme = Scheme::automatic, int ode_substeps = 8,
                          int max_depth = 16);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    bool converged = true;
    double worst_delta = 0.0;
};

/// Solution sampled at output_times (defaults to the driver grid).
Trajectory solve_path(const VectorFieldSet& F, const RoughPathGrid& driver,
                      const std::vector<double>& x0, std::vector<double> output_times = {},
                      double tol = 1e-9, Scheme scheme = Scheme::automatic,
                      int ode_substeps = 8, int max_depth = 16);

/// Residual of the integral form: max over grid times of
/// | z_t - z_0 - (rough integral of V(z) dX over [0,t]) |_inf, with z given
/// on the driver grid and derivatives its Gubinelli derivative (d x ell).
double integral_residual(const Trajectory& z, const std::vector<std::vector<double>>& derivatives,
                         const VectorFieldSet& F, const RoughPathGrid& driver, double tol = 1e-6);

/// Driver with each cell's log shifted by (cell length) * a, for a
/// perturbation tensor a concentrated at the top level.  The geometricity
/// flag of the result is recomputed, not copied.
RoughPathGrid perturbed_driver(const RoughPathGrid& X, const TruncatedTensor& a);

}  // namespace roughpath
