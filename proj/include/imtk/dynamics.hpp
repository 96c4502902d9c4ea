#ifndef IMTK_DYNAMICS_HPP
#define IMTK_DYNAMICS_HPP

#include <cstddef>
#include <vector>

#include "imtk/nonlin.hpp"
#include "imtk/spaces.hpp"
#include "imtk/spectrum.hpp"

namespace imtk {

struct EvolveConfig {
    double dt = 0.005;
    double horizon = 1.0;
    bool estimate_error = false;  // rerun with dt/2 and report the deviation
};

struct Trajectory {
    std::vector<double> times;
    std::vector<EnergyVector> states;
    bool completed = true;
    double last_valid_time = 0.0;
    double error_estimate = 0.0;

    const EnergyVector& back() const { return states.back(); }
};

/// Per-step exact propagation of the linear part with midpoint treatment of
/// the nonlinearity.  Exact on F = 0 for every eps >= 0 including the stiff
/// branch.  At eps = 0 the scalar parabolic equations are integrated and the
/// velocity is reconstructed as v = F(u) - Au.
Trajectory evolve(const EnergyVector& xi0, const NonlinearityModel& F, double eps,
                  const EvolveConfig& cfg, const EigenvalueSequence& seq);

struct InvarianceReport {
    double t_check = 0.0;
    double max_defect = 0.0;
    double mean_defect = 0.0;
    std::vector<double> defects;
};

struct EnergyFit {
    double C = 0.0;
    double K = 0.0;
};

/// Smallest (C, K) with X(t) <= C e^{Kt} X(0) along the trajectory, where
/// X(t) is the squared energy norm plus the unit-window dissipation integral.
/// sobolev = 0 uses the base energy norm, sobolev = 1 the second one.
EnergyFit fit_energy_growth(const Trajectory& traj, const EigenvalueSequence& seq,
                            int sobolev = 0);

/// Fit of ||xi1(t) - xi2(t)|| <= C e^{Kt} ||xi1(0) - xi2(0)||.
EnergyFit fit_pair_lipschitz(const Trajectory& a, const Trajectory& b,
                             const EigenvalueSequence& seq);

}  // namespace imtk

#endif
