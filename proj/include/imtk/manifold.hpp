#ifndef IMTK_MANIFOLD_HPP
#define IMTK_MANIFOLD_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imtk/dynamics.hpp"
#include "imtk/linsolve.hpp"
#include "imtk/nonlin.hpp"
#include "imtk/spaces.hpp"
#include "imtk/spectrum.hpp"

namespace imtk {

struct PerronConfig {
    std::size_t N = 1;
    double eps = 0.0;
    double theta = 0.0;
    double window = 0.0;        // backward truncation T
    std::size_t steps = 0;      // grid steps on [-T, 0]
    double fp_tol = 1e-10;      // scaled by (1 + ||p||) inside the iteration
    std::size_t fp_max_iter = 200;
    double track_t_plus = 4.0;  // forward tracking horizon
};

/// Fill window, steps and theta from the gap report; dt is the target node
/// spacing.
PerronConfig make_perron_config(const EigenvalueSequence& seq, std::size_t N, double eps,
                                double lipschitz, double dt = 0.005);

struct ManifoldPoint {
    std::vector<double> p;
    WeightedSignal trajectory_u;  // backward orbit on [-T, 0]
    WeightedSignal trajectory_v;
    EnergyVector value;           // (u(0), du/dt(0))
    std::size_t iterations = 0;
    double contraction_observed = 0.0;
    double residual = 0.0;
    double boundary_defect = 0.0;
    double energy1_ratio = 0.0;
};

ManifoldPoint construct_point(const std::vector<double>& p, const NonlinearityModel& F,
                              const PerronConfig& cfg, const EigenvalueSequence& seq);

struct ChartConfig {
    std::size_t axis_points = 3;    // per head direction, excluding 0
    std::size_t random_points = 4;  // uniform in the ball
    double radius = 1.0;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string cache_dir;          // empty disables the on-disk cache
};

struct ManifoldChart {
    std::vector<ManifoldPoint> points;
    double max_pair_ratio = 0.0;  // Lipschitz ratio over all sampled pairs
    bool from_cache = false;
};

ManifoldChart construct_chart(const NonlinearityModel& F, const PerronConfig& cfg,
                              const EigenvalueSequence& seq, const ChartConfig& chart);

struct LipschitzOfM {
    double max_ratio = 0.0;
    std::size_t pairs = 0;
};

LipschitzOfM lipschitz_of_M(const NonlinearityModel& F, const PerronConfig& cfg,
                            const EigenvalueSequence& seq,
                            const std::vector<std::vector<double>>& samples);

struct EpsilonComparison {
    std::vector<double> eps_used;
    std::vector<double> distance;      // eps-dependent energy norm of the difference
    std::vector<double> eps_skipped;   // failed the gap conditions
    double slope = 0.0;                // log-log least squares
    double intercept = 0.0;            // fitted log prefactor
};

EpsilonComparison compare_epsilon(const std::vector<double>& p, const NonlinearityModel& F,
                                  const std::vector<double>& eps_list, std::size_t N,
                                  double lipschitz, const EigenvalueSequence& seq,
                                  double dt = 0.005);

struct TrackingResult {
    EnergyVector shadow;          // w(0): backward extension lies in the manifold class
    double fitted_rate = 0.0;     // exponential decay rate of the tracking distance
    double sup_distance = 0.0;    // max over [1, T+] of the distance
    std::vector<double> times;    // nodes in [1, T+]
    std::vector<double> distances;
    std::size_t iterations = 0;
};

TrackingResult tracking_shadow(const EnergyVector& xi0, const NonlinearityModel& F,
                               const PerronConfig& cfg, const EigenvalueSequence& seq);

/// Split of a state into the slow graph component (v_n = mu_n^+ u_n on the
/// head modes) and its complement; the pieces sum back to xi exactly.
std::pair<EnergyVector, EnergyVector> graph_split(const EnergyVector& xi,
                                                  const EigenvalueSequence& seq,
                                                  std::size_t N, double eps);

/// Evolve each chart point forward by t_check, rebuild the manifold point at
/// the transported base coordinates, and report the mismatch.
InvarianceReport invariance_check(const ManifoldChart& chart, const NonlinearityModel& F,
                                  const PerronConfig& cfg, const EvolveConfig& ecfg,
                                  const EigenvalueSequence& seq, double t_check);

}  // namespace imtk

#endif
