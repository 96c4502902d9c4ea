#ifndef IMTK_LINSOLVE_HPP
#define IMTK_LINSOLVE_HPP

#include <cstddef>
#include <vector>

#include "imtk/spaces.hpp"
#include "imtk/spectrum.hpp"

namespace imtk {

/// Minimum of the Fourier symbol |R_n(mu)| of the weighted per-mode equation
/// over real frequencies.  The minimum of the reduced quadratic in z = mu^2
/// sits either at z = 0 (case I) or at the parabola vertex (case II); the
/// closed form is cross-checked by an independent grid search.
struct SymbolMinReport {
    std::size_t mode = 0;  // 0-based
    enum class MinAt { origin, vertex };
    MinAt case_tag = MinAt::origin;
    double z_star = 0.0;    // minimizing z = mu^2
    double min_abs = 0.0;   // closed-form min |R_n|
    double grid_check = 0.0;
};

SymbolMinReport symbol_min(double lambda_n, double theta, double eps,
                           double lambda_lo, double lambda_hi,
                           std::size_t mode = 0);

/// Validated bundle for the weighted linear solvers: spectral data, the
/// weight theta, characteristic roots and boundary coefficients.  Creation
/// fails when the gap conditions do not hold.
struct SolveContext {
    EigenvalueSequence seq;
    std::size_t N = 0;
    double eps = 0.0;
    double theta = 0.0;
    double gap = 0.0;
    double lambda_mid = 0.0;  // (lambda_N + lambda_{N+1}) / 2
    std::vector<CharacteristicRoots> roots;
    ProjectorCoefficients proj;

    std::size_t mode_count() const { return seq.count(); }
    double mu_plus_head() const { return roots[N - 1].mu_plus.real(); }
};

SolveContext make_solve_context(const EigenvalueSequence& seq, std::size_t N,
                                double eps, double lipschitz);

/// Solution of the per-mode linear problem together with basic diagnostics.
/// `u` is the state, `v` its exact time derivative from the factored solve.
struct LinearSolveResult {
    WeightedSignal u;
    WeightedSignal v;
    double residual_norm = 0.0;    // weighted L2 of the centered-difference residual
    double boundary_defect = 0.0;  // semiaxis solves only
    double norm_ratio = 0.0;       // ||u||_theta / ||h||_theta, 0 for h = 0
    double h_norm = 0.0;
    double u_norm = 0.0;
};

/// Unique solution in the weighted class on a truncated full line.  The
/// window must be large enough that the zero-inflow truncation error is
/// below the weighted noise floor (see default_window).
LinearSolveResult solve_full_line(const SolveContext& ctx, const WeightedSignal& h);

/// Backward orbit u_n(t) = p_n e^{mu_n^+ t} for the head modes; p must have
/// zero tail components.
struct BackwardOrbit {
    WeightedSignal u;
    WeightedSignal v;
};

BackwardOrbit homogeneous_backward(const SolveContext& ctx,
                                   const std::vector<double>& p,
                                   const TimeGrid& grid);

/// Solve on [-T, 0] with boundary data a_n u_n'(0) + b_n u_n(0) = p_n for the
/// head modes; the forcing is extended by zero ahead of t = 0.
LinearSolveResult solve_semiaxis(const SolveContext& ctx, const WeightedSignal& h,
                                 const std::vector<double>& p);

/// Weighted L2 norm of the centered-difference substitution of (u, h) into
/// the equation.  A left margin shorter than the stiff root's resolvable
/// scale is excluded.
double weighted_fd_residual(const SolveContext& ctx, const WeightedSignal& u,
                            const WeightedSignal& h);

/// Achieved left-hand/right-hand ratios of the smoothing and boundary
/// estimates for one solve.  The constants are not pinned by the theory, so
/// audits report the ratios instead of asserting bounds.
struct EstimateAudit {
    double smoothing_ratio = 0.0;        // trajectory norms vs data
    double energy_at0_ratio = 0.0;       // energy norm at t = 0 vs data
    double regular_ratio = 0.0;          // differentiated problem, needs dh/dt
    double energy1_at0_ratio = 0.0;      // second energy norm at t = 0
    double velocity_energy_ratio = 0.0;  // energy norm of (v, v') at t = 0
    bool all_finite = false;
};

EstimateAudit estimate_audit(const SolveContext& ctx, const LinearSolveResult& result,
                             const WeightedSignal& h, const std::vector<double>& p);

}  // namespace imtk

#endif
