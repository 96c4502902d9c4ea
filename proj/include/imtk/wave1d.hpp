#ifndef IMTK_WAVE1D_HPP
#define IMTK_WAVE1D_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imtk/manifold.hpp"
#include "imtk/nonlin.hpp"
#include "imtk/spectrum.hpp"

namespace imtk {

/// Smooth saturation of the scalar nonlinearity outside |u| <= cut_radius:
/// f_bar = f(psi(u)) with |psi'| <= 1, so the derivative bound of f on the
/// saturated range is not expanded.  Agrees with f exactly on |u| <= cut_radius.
ScalarFunction cutoff_scalar(const ScalarFunction& f, double cut_radius,
                             double blend_width_factor = 0.1);

/// sup |f'| over the saturated range, by dense scan.
double scalar_derivative_bound(const ScalarFunction& f, double range);

struct EllipticOptions {
    double tol = 1e-12;
    std::size_t newton_max_iter = 50;
    std::size_t fixed_point_max_iter = 400;
};

/// One solution G of the stationary problem A G = f_bar(G) + g on the
/// truncation (Newton with a damped fixed-point fallback; seeds 0, A^{-1} g,
/// then small random perturbations).
std::vector<double> solve_elliptic_shift(const ScalarFunction& fbar,
                                         const std::vector<double>& g,
                                         const EigenvalueSequence& seq,
                                         const EllipticOptions& opt = {});

/// F(u) = f_bar(u + G) - f_bar(G); vanishes at 0 exactly.  A nonpositive
/// derivative_bound triggers a dense scan for sup |f_bar'|.
NonlinPtr shift_nonlinearity(const ScalarFunction& fbar, const std::vector<double>& G,
                             const EigenvalueSequence& seq, double derivative_bound = -1.0);

struct WavePipelineConfig {
    ScalarFunction f;
    std::vector<double> forcing;    // g coefficients, length <= modes
    double apriori_radius = 1.0;    // R; the nonlinearity is saturated past 2R
    double cut_factor = 2.0;
    double blend_width_factor = 0.1;
    double eps = 0.0;
    std::optional<double> lipschitz_target;  // verified against the measured bound
    std::size_t modes = 64;
    double operator_length = 3.141592653589793;
    // nonempty: replaces the interval spectrum in the scan (degenerate-growth
    // studies); only the zero scalar nonlinearity is meaningful then, since
    // the pointwise transform is tied to the sine basis
    std::vector<double> custom_spectrum;
    double dt = 0.005;
    double t_check = 0.5;
    ChartConfig chart;
    EllipticOptions elliptic;
};

struct WavePipelineReport {
    std::vector<double> shift;        // G coefficients
    double elliptic_residual = 0.0;
    double lipschitz_measured = 0.0;  // sup |f_bar'|
    std::vector<std::size_t> admissible_N;
    bool has_admissible = false;
    std::size_t chosen_N = 0;
    double theta = 0.0;
    double contraction = 0.0;
    NonlinPtr nonlinearity;  // the shifted map the manifold step ran with
    ManifoldChart chart;
    double invariance_max_defect = 0.0;
    double tracking_rate = 0.0;
    double max_boundary_defect = 0.0;
    double max_residual = 0.0;
    std::string verdict;  // "ok" or "no admissible N at this (L, eps)"
};

WavePipelineReport run_pipeline(const WavePipelineConfig& cfg);

}  // namespace imtk

#endif
