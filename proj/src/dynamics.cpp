#include "imtk/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "imtk/detail/mode_kernels.hpp"
#include "imtk/errors.hpp"

namespace imtk {

namespace {

using detail::ModePropagator;

struct StepKernels {
    // eps > 0: exact 2x2 propagators for the full and half step plus the
    // response to a unit constant forcing.
    std::vector<ModePropagator> full, half;
    // eps == 0: scalar decay factors and responses
    std::vector<double> decay_full, resp_full, decay_half, resp_half;
};

StepKernels make_kernels(const EigenvalueSequence& seq, double eps, double dt) {
    StepKernels k;
    const std::size_t M = seq.count();
    if (eps > 0.0) {
        k.full.reserve(M);
        k.half.reserve(M);
        for (std::size_t i = 0; i < M; ++i) {
            k.full.emplace_back(seq.lambda(i), eps, dt);
            k.half.emplace_back(seq.lambda(i), eps, 0.5 * dt);
        }
    } else {
        k.decay_full.resize(M);
        k.resp_full.resize(M);
        k.decay_half.resize(M);
        k.resp_half.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            const double lam = seq.lambda(i);
            k.decay_full[i] = std::exp(-lam * dt);
            k.resp_full[i] = -std::expm1(-lam * dt) / lam;
            k.decay_half[i] = std::exp(-lam * 0.5 * dt);
            k.resp_half[i] = -std::expm1(-lam * 0.5 * dt) / lam;
        }
    }
    return k;
}

bool finite(const std::vector<double>& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Trajectory run(const EnergyVector& xi0, const NonlinearityModel& F, double eps,
               double dt, double horizon, const EigenvalueSequence& seq) {
    const std::size_t M = seq.count();
    if (xi0.size() != M) throw ValidationError("evolve: state length mismatch");
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    const StepKernels ker = make_kernels(seq, eps, dt);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);

    std::vector<double> u = xi0.u, v = xi0.v;
    if (eps == 0.0) {
        // the velocity is slaved in the parabolic mode
        const auto fu = F(u);
        for (std::size_t i = 0; i < M; ++i) v[i] = fu[i] - seq.lambda(i) * u[i];
    }
    traj.times.push_back(0.0);
    traj.states.push_back(EnergyVector(u, v, eps));

    std::vector<double> uh(M), vh(M), g(M);
    for (std::size_t s = 0; s < steps; ++s) {
        const auto g0 = F(u);
        if (eps > 0.0) {
            for (std::size_t i = 0; i < M; ++i) {
                const auto r = ker.half[i].unit_response();
                const ModePropagator& E = ker.half[i];
                uh[i] = E.e11 * u[i] + E.e12 * v[i] + r[0] * g0[i];
                vh[i] = E.e21 * u[i] + E.e22 * v[i] + r[1] * g0[i];
            }
            F.apply(uh, g);
            for (std::size_t i = 0; i < M; ++i) {
                const auto r = ker.full[i].unit_response();
                const ModePropagator& E = ker.full[i];
                const double un = E.e11 * u[i] + E.e12 * v[i] + r[0] * g[i];
                const double vn = E.e21 * u[i] + E.e22 * v[i] + r[1] * g[i];
                u[i] = un;
                v[i] = vn;
            }
        } else {
            for (std::size_t i = 0; i < M; ++i)
                uh[i] = ker.decay_half[i] * u[i] + ker.resp_half[i] * g0[i];
            F.apply(uh, g);
            for (std::size_t i = 0; i < M; ++i)
                u[i] = ker.decay_full[i] * u[i] + ker.resp_full[i] * g[i];
            F.apply(u, g);
            for (std::size_t i = 0; i < M; ++i) v[i] = g[i] - seq.lambda(i) * u[i];
        }
        if (!finite(u) || !finite(v)) {
            traj.completed = false;
            break;
        }
        traj.times.push_back(static_cast<double>(s + 1) * dt);
        traj.states.push_back(EnergyVector(u, v, eps));
    }
    traj.last_valid_time = traj.times.back();
    return traj;
}

}  // namespace

Trajectory evolve(const EnergyVector& xi0, const NonlinearityModel& F, double eps,
                  const EvolveConfig& cfg, const EigenvalueSequence& seq) {
    if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0))
        throw ValidationError("evolve: dt and horizon must be positive");
    Trajectory traj = run(xi0, F, eps, cfg.dt, cfg.horizon, seq);
    if (cfg.estimate_error && traj.completed) {
        const Trajectory fine = run(xi0, F, eps, 0.5 * cfg.dt, cfg.horizon, seq);
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            const EnergyVector d = energy_difference(traj.states[k], fine.states[2 * k]);
            worst = std::max(worst, energy_norm(d, seq));
        }
        traj.error_estimate = worst;
    }
    return traj;
}

namespace {

/// X(t_k) = squared energy norm + unit-window trapezoid of the dissipation
/// integrand; defined while a full unit window fits in the trajectory.
std::vector<std::pair<double, double>> energy_profile(const Trajectory& traj,
                                                      const EigenvalueSequence& seq,
                                                      int sobolev) {
    std::vector<std::pair<double, double>> xs;
    if (traj.times.size() < 2) return xs;
    const double dt = traj.times[1] - traj.times[0];
    const auto window = static_cast<std::size_t>(std::llround(1.0 / dt));
    for (std::size_t k = 0; k + window < traj.times.size(); ++k) {
        const EnergyVector& xi = traj.states[k];
        const double en = sobolev == 0 ? energy_norm(xi, seq) : energy1_norm(xi, seq);
        double integral = 0.0;
        for (std::size_t j = k; j <= k + window; ++j) {
            const double w = (j == k || j == k + window) ? 0.5 * dt : dt;
            const double s = sobolev == 0 ? 0.0 : 1.0;
            const double vn = hs_norm(traj.states[j].v, s, seq);
            integral += w * vn * vn;
        }
        xs.emplace_back(traj.times[k], en * en + integral);
    }
    return xs;
}

EnergyFit fit_exponential(const std::vector<std::pair<double, double>>& xs) {
    EnergyFit fit;
    if (xs.size() < 2 || xs.front().second <= 0.0) return fit;
    // least-squares slope of log X, floored at zero growth
    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    std::size_t n = 0;
    for (const auto& [t, x] : xs) {
        if (x <= 0.0) continue;
        const double lx = std::log(x);
        st += t;
        sx += lx;
        stt += t * t;
        stx += t * lx;
        ++n;
    }
    if (n < 2) return fit;
    const double den = static_cast<double>(n) * stt - st * st;
    double slope = den > 0.0 ? (static_cast<double>(n) * stx - st * sx) / den : 0.0;
    fit.K = std::max(0.0, slope);
    const double x0 = xs.front().second;
    for (const auto& [t, x] : xs) fit.C = std::max(fit.C, x / (x0 * std::exp(fit.K * t)));
    return fit;
}

}  // namespace

EnergyFit fit_energy_growth(const Trajectory& traj, const EigenvalueSequence& seq,
                            int sobolev) {
    return fit_exponential(energy_profile(traj, seq, sobolev));
}

EnergyFit fit_pair_lipschitz(const Trajectory& a, const Trajectory& b,
                             const EigenvalueSequence& seq) {
    if (a.times.size() != b.times.size())
        throw ValidationError("fit_pair_lipschitz: trajectories have different lengths");
    std::vector<std::pair<double, double>> xs;
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        const EnergyVector d = energy_difference(a.states[k], b.states[k]);
        xs.emplace_back(a.times[k], energy_norm(d, seq));
    }
    return fit_exponential(xs);
}

}  // namespace imtk
