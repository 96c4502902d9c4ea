#include "imtk/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <sstream>

#include "imtk/detail/rng.hpp"
#include "imtk/errors.hpp"
#include "imtk/report_io.hpp"

namespace imtk {

namespace {

double smoothstep01(double t) {
    const double s = std::clamp(t, 0.0, 1.0);
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep01_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

double smoothstep01_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

double effective_lipschitz(const NonlinearityModel& F) {
    return std::max(F.declared_lipschitz(), 1e-14);
}

std::vector<double> pad_base_point(const std::vector<double>& p, std::size_t N,
                                   std::size_t modes) {
    if (p.size() == modes) return p;
    if (p.size() != N)
        throw ValidationError("base point must have length N or the full mode count");
    std::vector<double> full(modes, 0.0);
    std::copy(p.begin(), p.end(), full.begin());
    return full;
}

double euclid(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

PerronConfig make_perron_config(const EigenvalueSequence& seq, std::size_t N, double eps,
                                double lipschitz, double dt) {
    if (seq.count() < N + 8)
        throw ValidationError("make_perron_config: truncation must satisfy count >= N + 8");
    const SpectralGapReport rep = gap_report(seq, N, eps, std::max(lipschitz, 1e-14));
    if (!rep.admissible() || !rep.theta)
        throw ConditionError("make_perron_config: spectral gap conditions fail");
    PerronConfig cfg;
    cfg.N = N;
    cfg.eps = eps;
    cfg.theta = *rep.theta;
    const double mu_head = characteristic_roots(seq.lambda(N - 1), eps).mu_plus.real();
    cfg.window = default_window(cfg.theta, mu_head);
    cfg.steps = static_cast<std::size_t>(std::ceil(cfg.window / dt));
    return cfg;
}

ManifoldPoint construct_point(const std::vector<double>& p, const NonlinearityModel& F,
                              const PerronConfig& cfg, const EigenvalueSequence& seq) {
    // the gap check inside the context is exactly the contraction requirement
    // 2L/gap < 1; an inadmissible model is refused there
    const SolveContext ctx = make_solve_context(seq, cfg.N, cfg.eps, effective_lipschitz(F));

    const std::vector<double> pf = pad_base_point(p, cfg.N, seq.count());
    const double pnorm = euclid(pf);
    const double tol = cfg.fp_tol * (1.0 + pnorm);
    const TimeGrid grid(-cfg.window, 0.0, cfg.steps);

    BackwardOrbit orbit = homogeneous_backward(ctx, pf, grid);
    WeightedSignal u = std::move(orbit.u);
    WeightedSignal v = std::move(orbit.v);

    ManifoldPoint out;
    out.p = pf;

    WeightedSignal h(grid, seq.count());
    std::vector<double> state(seq.count()), image(seq.count());
    std::vector<double> increments;
    double prev_inc = -1.0;

    for (std::size_t iter = 1; iter <= cfg.fp_max_iter; ++iter) {
        for (std::size_t k = 0; k < grid.nodes(); ++k) {
            for (std::size_t n = 0; n < seq.count(); ++n) state[n] = u.at(n, k);
            F.apply(state, image);
            for (std::size_t n = 0; n < seq.count(); ++n) h.at(n, k) = image[n];
        }
        LinearSolveResult sol = solve_semiaxis(ctx, h, pf);

        WeightedSignal diff = sol.u;
        for (std::size_t n = 0; n < seq.count(); ++n)
            for (std::size_t k = 0; k < grid.nodes(); ++k) diff.at(n, k) -= u.at(n, k);
        const double inc = weighted_l2_norm(diff, cfg.theta, 0.0, seq);
        increments.push_back(inc);
        if (prev_inc > 0.0)
            out.contraction_observed = std::max(out.contraction_observed, inc / prev_inc);
        prev_inc = inc;

        u = std::move(sol.u);
        v = std::move(sol.v);
        out.iterations = iter;
        out.boundary_defect = sol.boundary_defect;
        if (inc < tol) break;
        if (iter == cfg.fp_max_iter)
            throw ConvergenceError("construct_point: fixed point did not converge", increments);
    }

    // residual of the full nonlinear equation at the converged orbit
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        for (std::size_t n = 0; n < seq.count(); ++n) state[n] = u.at(n, k);
        F.apply(state, image);
        for (std::size_t n = 0; n < seq.count(); ++n) h.at(n, k) = image[n];
    }
    out.residual = weighted_fd_residual(ctx, u, h);
    if (cfg.eps == 0.0) {
        // slaved velocity, consistent with the converged orbit
        for (std::size_t n = 0; n < seq.count(); ++n)
            for (std::size_t k = 0; k < grid.nodes(); ++k)
                v.at(n, k) = h.at(n, k) - seq.lambda(n) * u.at(n, k);
    }

    const std::size_t last = grid.nodes() - 1;
    out.value = EnergyVector(u.snapshot(last), v.snapshot(last), cfg.eps);
    out.energy1_ratio = pnorm > 0.0 ? energy1_norm(out.value, seq) / pnorm : 0.0;
    out.trajectory_u = std::move(u);
    out.trajectory_v = std::move(v);
    return out;
}

// ---------------------------------------------------------------------------
// charts

namespace {

std::string chart_cache_key(const NonlinearityModel& F, const PerronConfig& cfg,
                            const EigenvalueSequence& seq, const ChartConfig& chart) {
    std::ostringstream os;
    os << F.describe() << "|N=" << cfg.N << "|eps=" << format_double(cfg.eps)
       << "|steps=" << cfg.steps << "|window=" << format_double(cfg.window)
       << "|axis=" << chart.axis_points << "|rand=" << chart.random_points
       << "|radius=" << format_double(chart.radius) << "|seed=" << chart.seed << "|";
    for (std::size_t i = 0; i < seq.count(); ++i) os << format_double(seq.lambda(i)) << ",";
    return fnv1a_hex(os.str());
}

CsvTable chart_to_table(const ManifoldChart& chart, std::size_t N, std::size_t modes) {
    CsvTable t;
    for (std::size_t i = 1; i <= N; ++i) t.header.push_back("p_" + std::to_string(i));
    for (std::size_t i = 1; i <= modes; ++i) t.header.push_back("u_" + std::to_string(i));
    for (std::size_t i = 1; i <= modes; ++i) t.header.push_back("v_" + std::to_string(i));
    t.header.insert(t.header.end(), {"iterations", "contraction", "residual",
                                     "boundary_defect", "energy1_ratio"});
    for (const auto& pt : chart.points) {
        std::vector<double> row;
        for (std::size_t i = 0; i < N; ++i) row.push_back(pt.p[i]);
        for (double x : pt.value.u) row.push_back(x);
        for (double x : pt.value.v) row.push_back(x);
        row.push_back(static_cast<double>(pt.iterations));
        row.push_back(pt.contraction_observed);
        row.push_back(pt.residual);
        row.push_back(pt.boundary_defect);
        row.push_back(pt.energy1_ratio);
        t.rows.push_back(std::move(row));
    }
    return t;
}

ManifoldChart chart_from_table(const CsvTable& t, std::size_t N, std::size_t modes,
                               double eps) {
    ManifoldChart chart;
    chart.from_cache = true;
    for (const auto& row : t.rows) {
        ManifoldPoint pt;
        pt.p.assign(modes, 0.0);
        std::size_t c = 0;
        for (std::size_t i = 0; i < N; ++i) pt.p[i] = row[c++];
        std::vector<double> u(modes), v(modes);
        for (std::size_t i = 0; i < modes; ++i) u[i] = row[c++];
        for (std::size_t i = 0; i < modes; ++i) v[i] = row[c++];
        pt.value = EnergyVector(std::move(u), std::move(v), eps);
        pt.iterations = static_cast<std::size_t>(row[c++]);
        pt.contraction_observed = row[c++];
        pt.residual = row[c++];
        pt.boundary_defect = row[c++];
        pt.energy1_ratio = row[c++];
        chart.points.push_back(std::move(pt));
    }
    return chart;
}

}  // namespace

ManifoldChart construct_chart(const NonlinearityModel& F, const PerronConfig& cfg,
                              const EigenvalueSequence& seq, const ChartConfig& chart_cfg) {
    namespace fs = std::filesystem;
    std::string cache_path;
    if (!chart_cfg.cache_dir.empty()) {
        cache_path = chart_cfg.cache_dir + "/chart_" +
                     chart_cache_key(F, cfg, seq, chart_cfg) + ".csv";
        if (fs::exists(cache_path)) {
            ManifoldChart cached =
                chart_from_table(read_csv(cache_path), cfg.N, seq.count(), cfg.eps);
            // pair ratios are cheap; recompute from the cached values
            for (std::size_t i = 0; i < cached.points.size(); ++i)
                for (std::size_t j = i + 1; j < cached.points.size(); ++j) {
                    std::vector<double> dpv(seq.count());
                    for (std::size_t n = 0; n < seq.count(); ++n)
                        dpv[n] = cached.points[i].p[n] - cached.points[j].p[n];
                    const double dp = euclid(dpv);
                    if (dp == 0.0) continue;
                    const EnergyVector d =
                        energy_difference(cached.points[i].value, cached.points[j].value);
                    cached.max_pair_ratio =
                        std::max(cached.max_pair_ratio, energy_norm(d, seq) / dp);
                }
            return cached;
        }
    }

    // axis-aligned samples plus uniform samples in a ball
    std::vector<std::vector<double>> samples;
    for (std::size_t axis = 0; axis < cfg.N; ++axis)
        for (std::size_t j = 1; j <= chart_cfg.axis_points; ++j) {
            const double amp =
                chart_cfg.radius * static_cast<double>(j) / static_cast<double>(chart_cfg.axis_points);
            for (double sign : {1.0, -1.0}) {
                std::vector<double> p(seq.count(), 0.0);
                p[axis] = sign * amp;
                samples.push_back(std::move(p));
            }
        }
    detail::Rng rng(chart_cfg.seed);
    for (std::size_t r = 0; r < chart_cfg.random_points; ++r) {
        std::vector<double> dir(cfg.N);
        double norm = 0.0;
        for (auto& d : dir) {
            d = rng.normal();
            norm += d * d;
        }
        norm = std::sqrt(norm);
        const double radius =
            chart_cfg.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(cfg.N));
        std::vector<double> p(seq.count(), 0.0);
        for (std::size_t i = 0; i < cfg.N; ++i) p[i] = radius * dir[i] / norm;
        samples.push_back(std::move(p));
    }

    ManifoldChart chart;
    chart.points.resize(samples.size());
    const int threads = std::max(1, chart_cfg.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < samples.size(); ++i)
            chart.points[i] = construct_point(samples[i], F, cfg, seq);
    } else {
        std::vector<std::future<ManifoldPoint>> futures(samples.size());
        std::size_t next = 0;
        while (next < samples.size()) {
            const std::size_t batch =
                std::min<std::size_t>(static_cast<std::size_t>(threads), samples.size() - next);
            for (std::size_t b = 0; b < batch; ++b)
                futures[next + b] = std::async(std::launch::async, [&, idx = next + b] {
                    return construct_point(samples[idx], F, cfg, seq);
                });
            for (std::size_t b = 0; b < batch; ++b)
                chart.points[next + b] = futures[next + b].get();
            next += batch;
        }
    }

    for (std::size_t i = 0; i < chart.points.size(); ++i)
        for (std::size_t j = i + 1; j < chart.points.size(); ++j) {
            std::vector<double> dpv(seq.count());
            for (std::size_t n = 0; n < seq.count(); ++n)
                dpv[n] = chart.points[i].p[n] - chart.points[j].p[n];
            const double dp = euclid(dpv);
            if (dp == 0.0) continue;
            const EnergyVector d = energy_difference(chart.points[i].value, chart.points[j].value);
            chart.max_pair_ratio = std::max(chart.max_pair_ratio, energy_norm(d, seq) / dp);
        }

    if (!cache_path.empty()) {
        fs::create_directories(chart_cfg.cache_dir);
        write_csv(cache_path, chart_to_table(chart, cfg.N, seq.count()));
    }
    return chart;
}

LipschitzOfM lipschitz_of_M(const NonlinearityModel& F, const PerronConfig& cfg,
                            const EigenvalueSequence& seq,
                            const std::vector<std::vector<double>>& samples) {
    LipschitzOfM rep;
    std::vector<ManifoldPoint> pts;
    pts.reserve(samples.size());
    for (const auto& p : samples) pts.push_back(construct_point(p, F, cfg, seq));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            std::vector<double> dpv(seq.count());
            for (std::size_t n = 0; n < seq.count(); ++n) dpv[n] = pts[i].p[n] - pts[j].p[n];
            const double dp = euclid(dpv);
            if (dp == 0.0) continue;
            const EnergyVector d = energy_difference(pts[i].value, pts[j].value);
            rep.max_ratio = std::max(rep.max_ratio, energy_norm(d, seq) / dp);
            ++rep.pairs;
        }
    return rep;
}

EpsilonComparison compare_epsilon(const std::vector<double>& p, const NonlinearityModel& F,
                                  const std::vector<double>& eps_list, std::size_t N,
                                  double lipschitz, const EigenvalueSequence& seq, double dt) {
    EpsilonComparison cmp;
    PerronConfig cfg0 = make_perron_config(seq, N, 0.0, lipschitz, dt);
    // one shared time grid for every run: the discretization bias then
    // cancels in the differences instead of flooring the small-eps distances
    double window = cfg0.window;
    for (double eps : eps_list) {
        if (eps == 0.0) continue;
        const SpectralGapReport rep = gap_report(seq, N, eps, std::max(lipschitz, 1e-14));
        if (rep.admissible())
            window = std::max(window,
                              make_perron_config(seq, N, eps, lipschitz, dt).window);
    }
    cfg0.window = window;
    cfg0.steps = static_cast<std::size_t>(std::ceil(window / dt));
    const ManifoldPoint m0 = construct_point(p, F, cfg0, seq);

    for (double eps : eps_list) {
        if (eps == 0.0) continue;
        const SpectralGapReport rep = gap_report(seq, N, eps, std::max(lipschitz, 1e-14));
        if (!rep.admissible()) {
            cmp.eps_skipped.push_back(eps);
            continue;
        }
        PerronConfig cfg = make_perron_config(seq, N, eps, lipschitz, dt);
        cfg.window = cfg0.window;
        cfg.steps = cfg0.steps;
        const ManifoldPoint m = construct_point(p, F, cfg, seq);
        EnergyVector d = energy_difference(m.value, m0.value);
        d.eps = eps;  // the theorem's norm depends on eps
        cmp.eps_used.push_back(eps);
        cmp.distance.push_back(energy_norm(d, seq));
    }

    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < cmp.eps_used.size(); ++i) {
        if (cmp.distance[i] <= 0.0) continue;
        const double lt = std::log(cmp.eps_used[i]);
        const double lx = std::log(cmp.distance[i]);
        st += lt;
        sx += lx;
        stt += lt * lt;
        stx += lt * lx;
        ++n;
    }
    if (n >= 2) {
        const double den = static_cast<double>(n) * stt - st * st;
        cmp.slope = (static_cast<double>(n) * stx - st * sx) / den;
        cmp.intercept = (sx - cmp.slope * st) / static_cast<double>(n);
    }
    return cmp;
}

TrackingResult tracking_shadow(const EnergyVector& xi0, const NonlinearityModel& F,
                               const PerronConfig& cfg, const EigenvalueSequence& seq) {
    const SolveContext ctx = make_solve_context(seq, cfg.N, cfg.eps, effective_lipschitz(F));

    const double dt = cfg.window / static_cast<double>(cfg.steps);
    // pad the forward horizon: the anticausal truncation at the right end
    // contaminates a backward boundary layer of width ~1/(theta + mu_N^+)
    const double margin = ctx.theta + ctx.mu_plus_head();
    const double pad = std::min(0.75 * cfg.window, 6.0 / margin);
    const auto fwd_steps =
        static_cast<std::size_t>(std::ceil((cfg.track_t_plus + pad) / dt));
    const double t_plus = static_cast<double>(fwd_steps) * dt;
    const TimeGrid grid(-cfg.window, t_plus, cfg.steps + fwd_steps);
    const std::size_t zero_node = cfg.steps;

    EvolveConfig ecfg;
    ecfg.dt = dt;
    ecfg.horizon = t_plus;
    const Trajectory fwd = evolve(xi0, F, cfg.eps, ecfg, seq);
    if (!fwd.completed) throw ConvergenceError("tracking_shadow: forward trajectory blew up");

    const std::size_t M = seq.count();
    const double xnorm = energy_norm(xi0, seq);
    const double tol = cfg.fp_tol * (1.0 + xnorm);

    WeightedSignal vu(grid, M), vv(grid, M);
    WeightedSignal rhs(grid, M);
    std::vector<double> state(M), fu_cache(M), image(M);

    TrackingResult out;
    std::vector<double> increments;
    double prev_inc = -1.0;
    for (std::size_t iter = 1; iter <= cfg.fp_max_iter; ++iter) {
        for (std::size_t k = 0; k < grid.nodes(); ++k) {
            const double t = grid.node(k);
            const double phi = smoothstep01(t);
            const double dphi = smoothstep01_d1(t);
            const double ddphi = smoothstep01_d2(t);
            if (t < 0.0) {
                for (std::size_t n = 0; n < M; ++n) state[n] = vu.at(n, k);
                F.apply(state, image);
                for (std::size_t n = 0; n < M; ++n) rhs.at(n, k) = image[n];
                continue;
            }
            const EnergyVector& w = fwd.states[k - zero_node];
            for (std::size_t n = 0; n < M; ++n) state[n] = phi * w.u[n] + vu.at(n, k);
            F.apply(state, image);
            if (phi != 0.0) {
                F.apply(w.u, fu_cache);
                for (std::size_t n = 0; n < M; ++n) image[n] -= phi * fu_cache[n];
            }
            for (std::size_t n = 0; n < M; ++n)
                rhs.at(n, k) = image[n] - (cfg.eps * ddphi + dphi) * w.u[n] -
                               2.0 * cfg.eps * dphi * w.v[n];
        }
        LinearSolveResult sol = solve_full_line(ctx, rhs);

        // increment over [-T, t_plus] only: the padded nodes exist to absorb
        // the right-end truncation and their exponential weight would turn
        // tail roundoff into a convergence floor
        WeightedSignal diff = sol.u;
        for (std::size_t n = 0; n < M; ++n)
            for (std::size_t k = 0; k < grid.nodes(); ++k)
                diff.at(n, k) = grid.node(k) <= cfg.track_t_plus
                                    ? diff.at(n, k) - vu.at(n, k)
                                    : 0.0;
        const double inc = weighted_l2_norm(diff, cfg.theta, 0.0, seq);
        increments.push_back(inc);
        vu = std::move(sol.u);
        vv = std::move(sol.v);
        out.iterations = iter;
        if (prev_inc >= 0.0 && inc < tol) break;
        prev_inc = inc;
        if (iter == cfg.fp_max_iter)
            throw ConvergenceError("tracking_shadow: fixed point did not converge",
                                   increments);
    }

    out.shadow = EnergyVector(vu.snapshot(zero_node), vv.snapshot(zero_node), cfg.eps);

    // distance to the shadow trajectory equals the correction norm once the
    // blend is complete
    double dmax = 0.0;
    for (std::size_t k = zero_node; k < grid.nodes(); ++k) {
        const double t = grid.node(k);
        if (t < 1.0 || t > cfg.track_t_plus) continue;
        const EnergyVector xi(vu.snapshot(k), vv.snapshot(k), cfg.eps);
        const double d = energy_norm(xi, seq);
        out.times.push_back(t);
        out.distances.push_back(d);
        dmax = std::max(dmax, d);
    }
    out.sup_distance = dmax;

    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        if (out.distances[i] <= dmax * 1e-12 || out.distances[i] <= 0.0) continue;
        const double lx = std::log(out.distances[i]);
        st += out.times[i];
        sx += lx;
        stt += out.times[i] * out.times[i];
        stx += out.times[i] * lx;
        ++n;
    }
    if (n >= 2) {
        const double den = static_cast<double>(n) * stt - st * st;
        if (den > 0.0) out.fitted_rate = -((static_cast<double>(n) * stx - st * sx) / den);
    }
    return out;
}

std::pair<EnergyVector, EnergyVector> graph_split(const EnergyVector& xi,
                                                  const EigenvalueSequence& seq,
                                                  std::size_t N, double eps) {
    if (xi.size() != seq.count()) throw ValidationError("graph_split: length mismatch");
    const ProjectorCoefficients pc = projector_coefficients(seq, N, eps);
    EnergyVector plus(std::vector<double>(xi.size(), 0.0),
                      std::vector<double>(xi.size(), 0.0), eps);
    for (std::size_t i = 0; i < N; ++i) {
        const double mu = characteristic_roots(seq.lambda(i), eps).mu_plus.real();
        const double comp = pc.a[i] * xi.v[i] + pc.b[i] * xi.u[i];
        plus.u[i] = comp;
        plus.v[i] = mu * comp;
    }
    EnergyVector minus = energy_difference(xi, plus);
    minus.eps = eps;
    return {std::move(plus), std::move(minus)};
}

InvarianceReport invariance_check(const ManifoldChart& chart, const NonlinearityModel& F,
                                  const PerronConfig& cfg, const EvolveConfig& ecfg,
                                  const EigenvalueSequence& seq, double t_check) {
    const ProjectorCoefficients pc = projector_coefficients(seq, cfg.N, cfg.eps);
    InvarianceReport rep;
    rep.t_check = t_check;
    EvolveConfig run = ecfg;
    run.horizon = t_check;
    for (const auto& pt : chart.points) {
        const Trajectory traj = evolve(pt.value, F, cfg.eps, run, seq);
        if (!traj.completed) throw ConvergenceError("invariance_check: trajectory blew up");
        const EnergyVector& xi_t = traj.back();
        std::vector<double> p_new(seq.count(), 0.0);
        for (std::size_t i = 0; i < cfg.N; ++i)
            p_new[i] = pc.a[i] * xi_t.v[i] + pc.b[i] * xi_t.u[i];
        const ManifoldPoint fresh = construct_point(p_new, F, cfg, seq);
        const EnergyVector d = energy_difference(xi_t, fresh.value);
        const double defect = energy_norm(d, seq) / (1.0 + euclid(pt.p));
        rep.defects.push_back(defect);
        rep.max_defect = std::max(rep.max_defect, defect);
    }
    if (!rep.defects.empty()) {
        double s = 0.0;
        for (double d : rep.defects) s += d;
        rep.mean_defect = s / static_cast<double>(rep.defects.size());
    }
    return rep;
}

}  // namespace imtk
