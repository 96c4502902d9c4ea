#include "imtk/commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "imtk/config.hpp"
#include "imtk/detail/rng.hpp"
#include "imtk/dynamics.hpp"
#include "imtk/errors.hpp"
#include "imtk/manifold.hpp"
#include "imtk/report_io.hpp"
#include "imtk/wave1d.hpp"

namespace imtk {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kToolVersion = "imtk 0.1.0";
constexpr int kSchemaVersion = 1;

const std::set<std::string> kOperatorKeys = {
    "operator.kind", "operator.length", "operator.dimension", "operator.scale",
    "operator.values", "operator.modes"};

const std::set<std::string> kNonlinKeys = {
    "nonlinearity.kind", "nonlinearity.c", "nonlinearity.coefficients", "nonlinearity.N",
    "nonlinearity.delta_rot", "nonlinearity.L", "nonlinearity.delta", "nonlinearity.R",
    "nonlinearity.mollifier_width", "nonlinearity.table", "nonlinearity.builtin",
    "nonlinearity.scale"};

std::set<std::string> with(std::set<std::string> base, const std::set<std::string>& extra) {
    base.insert(extra.begin(), extra.end());
    return base;
}

struct CommandContext {
    RunConfig config;
    CliOptions options;
    fs::path out;
    std::chrono::steady_clock::time_point start;
    std::vector<std::string> files;

    std::string out_file(const std::string& name) {
        files.push_back(name);
        return (out / name).string();
    }
};

CommandContext begin_command(const CliOptions& options, const std::string& command) {
    CommandContext ctx{RunConfig::parse_file(options.config_path), options, {}, {}, {}};
    std::string root = options.out_dir;
    if (root.empty()) {
        if (const char* env = std::getenv("IMTK_OUT_ROOT"))
            root = std::string(env) + "/" + command;
        else
            root = "out/" + command;
    }
    ctx.out = root;
    fs::create_directories(ctx.out);
    ctx.start = std::chrono::steady_clock::now();
    return ctx;
}

void write_manifest(CommandContext& ctx, const std::string& command) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - ctx.start)
                             .count();
    json m;
    m["schema_version"] = kSchemaVersion;
    m["tool_version"] = kToolVersion;
    m["command"] = command;
    m["config_path"] = ctx.options.config_path;
    m["config_hash"] = fnv1a_hex(ctx.config.canonical_text());
    m["seed"] = ctx.options.seed;
    m["threads"] = ctx.options.threads;
    m["timing_ms"] = elapsed;
    m["files"] = ctx.files;
    std::ofstream out(ctx.out / "manifest.json", std::ios::binary);
    out << m.dump(2) << "\n";
}

void write_json(CommandContext& ctx, const std::string& name, const json& j) {
    std::ofstream out(ctx.out / name, std::ios::binary);
    out << j.dump(2) << "\n";
    ctx.files.push_back(name);
}

json gap_report_json(const SpectralGapReport& r) {
    json j;
    j["N"] = r.N;
    j["lambda_N"] = r.lambda_lo;
    j["lambda_N1"] = r.lambda_hi;
    j["gap"] = r.gap;
    j["gap_ok"] = r.gap_ok;
    j["eps_ok"] = r.eps_ok;
    if (r.theta)
        j["theta"] = *r.theta;
    else
        j["theta"] = nullptr;
    j["contraction"] = r.contraction;
    j["n_cr"] = r.n_cr.unbounded ? json("unbounded") : json(r.n_cr.value);
    j["admissible"] = r.admissible();
    return j;
}

std::size_t pick_dimension(const RunConfig& cfg, const EigenvalueSequence& seq, double eps,
                           double L) {
    if (cfg.has("N")) return static_cast<std::size_t>(cfg.get_int("N"));
    const auto scan = gap_scan(seq, std::max(L, 1e-14), eps);
    for (const auto& r : scan)
        if (r.N + 8 <= seq.count()) return r.N;
    throw ConditionError("no admissible N for the requested configuration");
}

void write_trajectory_csv(CommandContext& ctx, const std::string& name,
                          const Trajectory& traj, const EigenvalueSequence& seq,
                          bool per_mode) {
    CsvTable t;
    t.header = {"t", "energy_norm"};
    if (per_mode)
        for (std::size_t n = 1; n <= seq.count(); ++n)
            t.header.push_back("u_" + std::to_string(n));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<double> row{traj.times[k], energy_norm(traj.states[k], seq)};
        if (per_mode)
            for (double x : traj.states[k].u) row.push_back(x);
        t.rows.push_back(std::move(row));
    }
    write_csv(ctx.out_file(name), t);
}

// -----------------------------------------------------------------------
// analyze

int cmd_analyze(const CliOptions& options) {
    CommandContext ctx = begin_command(options, "analyze");
    ctx.config.restrict_keys(with(kOperatorKeys, {"eps", "L", "N", "seed"}));

    const EigenvalueSequence seq =
        eigenvalues(operator_from_config(ctx.config), modes_from_config(ctx.config));
    const double eps = ctx.config.get_double("eps");
    const double L = ctx.config.get_double("L");

    json j;
    j["schema_version"] = kSchemaVersion;
    j["operator"] = seq.generator.describe();
    j["modes"] = seq.count();
    j["eps"] = eps;
    j["L"] = L;

    const CriticalIndex ncr = critical_index(seq, eps);
    j["n_cr"] = ncr.unbounded ? json("unbounded") : json(ncr.value);

    json roots = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(seq.count(), 16); ++i) {
        const CharacteristicRoots r = characteristic_roots(seq.lambda(i), eps);
        roots.push_back({{"mode", i + 1},
                         {"lambda", seq.lambda(i)},
                         {"mu_plus_re", r.mu_plus.real()},
                         {"mu_plus_im", r.mu_plus.imag()},
                         {"mu_minus_re", r.mu_minus.real()},
                         {"mu_minus_im", r.mu_minus.imag()},
                         {"discriminant", r.discriminant}});
    }
    j["roots"] = roots;

    bool pass = false;
    if (ctx.config.has("N")) {
        const auto N = static_cast<std::size_t>(ctx.config.get_int("N"));
        const SpectralGapReport rep = gap_report(seq, N, eps, L);
        j["report"] = gap_report_json(rep);
        pass = rep.admissible();
        std::cout << "N = " << N << "  gap = " << rep.gap << "  gap_ok = " << rep.gap_ok
                  << "  eps_ok = " << rep.eps_ok << "  theta = "
                  << (rep.theta ? format_double(*rep.theta) : std::string("undefined"))
                  << "  kappa = " << rep.contraction << "\n";
        if (!rep.gap_ok) std::cout << "reason: gap condition\n";
        if (!rep.eps_ok) std::cout << "reason: eps condition\n";
    }
    json scan = json::array();
    for (const auto& r : gap_scan(seq, L, eps)) scan.push_back(gap_report_json(r));
    j["admissible"] = scan;
    if (!ctx.config.has("N")) pass = !scan.empty();
    j["verdict"] = pass ? "PASS" : "FAIL";
    std::cout << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";

    write_json(ctx, "analyze.json", j);
    write_manifest(ctx, "analyze");
    return pass ? 0 : 3;
}

// -----------------------------------------------------------------------
// construct

ChartConfig chart_from_config(const RunConfig& cfg, const CliOptions& options) {
    ChartConfig chart;
    chart.axis_points = static_cast<std::size_t>(cfg.get_int("chart.axis_points", 2));
    chart.random_points = static_cast<std::size_t>(cfg.get_int("chart.random_points", 4));
    chart.radius = cfg.get_double("chart.radius", 1.0);
    chart.seed = options.seed;
    chart.threads = options.threads;
    chart.cache_dir = cfg.get_string("chart.cache_dir", "");
    return chart;
}

json chart_summary(const ManifoldChart& chart) {
    double max_defect = 0.0, max_res = 0.0, max_contr = 0.0, max_e1 = 0.0;
    for (const auto& pt : chart.points) {
        max_defect = std::max(max_defect, pt.boundary_defect);
        max_res = std::max(max_res, pt.residual);
        max_contr = std::max(max_contr, pt.contraction_observed);
        max_e1 = std::max(max_e1, pt.energy1_ratio);
    }
    return json{{"points", chart.points.size()},
                {"max_boundary_defect", max_defect},
                {"max_residual", max_res},
                {"max_contraction", max_contr},
                {"max_energy1_ratio", max_e1},
                {"lipschitz_ratio", chart.max_pair_ratio},
                {"from_cache", chart.from_cache}};
}

void write_chart_csv(CommandContext& ctx, const ManifoldChart& chart, std::size_t N,
                     std::size_t modes) {
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
    write_csv(ctx.out_file("chart.csv"), t);
}

int cmd_construct(const CliOptions& options) {
    CommandContext ctx = begin_command(options, "construct");
    ctx.config.restrict_keys(with(with(kOperatorKeys, kNonlinKeys),
                                  {"eps", "L", "N", "grid.dt", "chart.axis_points",
                                   "chart.random_points", "chart.radius", "chart.cache_dir",
                                   "fp.tol", "fp.max_iter", "seed"}));
    const EigenvalueSequence seq =
        eigenvalues(operator_from_config(ctx.config), modes_from_config(ctx.config));
    const double eps = ctx.config.get_double("eps");
    const NonlinPtr F = nonlinearity_from_config(ctx.config, seq);
    const double L = ctx.config.get_double("L", F->declared_lipschitz());
    const std::size_t N = pick_dimension(ctx.config, seq, eps, L);

    PerronConfig cfg = make_perron_config(seq, N, eps, L, ctx.config.get_double("grid.dt", 0.005));
    cfg.fp_tol = ctx.config.get_double("fp.tol", 1e-10);
    cfg.fp_max_iter = static_cast<std::size_t>(ctx.config.get_int("fp.max_iter", 200));

    const ManifoldChart chart = construct_chart(*F, cfg, seq, chart_from_config(ctx.config, options));
    write_chart_csv(ctx, chart, N, seq.count());

    json j;
    j["schema_version"] = kSchemaVersion;
    j["N"] = N;
    j["eps"] = eps;
    j["theta"] = cfg.theta;
    j["window"] = cfg.window;
    j["chart"] = chart_summary(chart);
    write_json(ctx, "summary.json", j);
    write_manifest(ctx, "construct");
    return 0;
}

// -----------------------------------------------------------------------
// track

int cmd_track(const CliOptions& options) {
    CommandContext ctx = begin_command(options, "track");
    ctx.config.restrict_keys(with(with(kOperatorKeys, kNonlinKeys),
                                  {"eps", "L", "N", "grid.dt", "track.t_plus", "ic.u", "ic.v",
                                   "fp.tol", "fp.max_iter", "seed"}));
    const EigenvalueSequence seq =
        eigenvalues(operator_from_config(ctx.config), modes_from_config(ctx.config));
    const double eps = ctx.config.get_double("eps");
    const NonlinPtr F = nonlinearity_from_config(ctx.config, seq);
    const double L = ctx.config.get_double("L", F->declared_lipschitz());
    const std::size_t N = pick_dimension(ctx.config, seq, eps, L);

    PerronConfig cfg = make_perron_config(seq, N, eps, L, ctx.config.get_double("grid.dt", 0.005));
    cfg.track_t_plus = ctx.config.get_double("track.t_plus", 4.0);

    std::vector<double> u0(seq.count(), 0.0), v0(seq.count(), 0.0);
    if (ctx.config.has("ic.u")) {
        const auto raw = ctx.config.get_list("ic.u");
        std::copy(raw.begin(), raw.end(), u0.begin());
        if (ctx.config.has("ic.v")) {
            const auto rv = ctx.config.get_list("ic.v");
            std::copy(rv.begin(), rv.end(), v0.begin());
        }
    } else {
        detail::Rng rng(options.seed);
        for (std::size_t n = 0; n < seq.count(); ++n) {
            u0[n] = rng.normal() / (1.0 + seq.lambda(n));
            v0[n] = rng.normal() / (1.0 + std::sqrt(seq.lambda(n)));
        }
    }

    const TrackingResult tr = tracking_shadow(EnergyVector(u0, v0, eps), *F, cfg, seq);

    CsvTable t;
    t.header = {"t", "distance"};
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        t.rows.push_back({tr.times[k], tr.distances[k]});
    write_csv(ctx.out_file("tracking.csv"), t);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["N"] = N;
    j["theta"] = cfg.theta;
    j["fitted_rate"] = tr.fitted_rate;
    j["rate_over_theta"] = tr.fitted_rate / cfg.theta;
    j["sup_distance"] = tr.sup_distance;
    j["iterations"] = tr.iterations;
    json shadow;
    shadow["u"] = tr.shadow.u;
    shadow["v"] = tr.shadow.v;
    j["shadow"] = shadow;
    write_json(ctx, "summary.json", j);
    write_manifest(ctx, "track");
    return 0;
}

// -----------------------------------------------------------------------
// compare-eps

int cmd_compare_eps(const CliOptions& options) {
    CommandContext ctx = begin_command(options, "compare-eps");
    ctx.config.restrict_keys(with(with(kOperatorKeys, kNonlinKeys),
                                  {"eps", "L", "N", "grid.dt", "compare.eps_list", "compare.p",
                                   "seed"}));
    const EigenvalueSequence seq =
        eigenvalues(operator_from_config(ctx.config), modes_from_config(ctx.config));
    const NonlinPtr F = nonlinearity_from_config(ctx.config, seq);
    const double L = ctx.config.get_double("L", F->declared_lipschitz());
    const std::size_t N = pick_dimension(ctx.config, seq, 0.0, L);

    std::vector<double> eps_list = ctx.config.has("compare.eps_list")
                                       ? ctx.config.get_list("compare.eps_list")
                                       : std::vector<double>{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::vector<double> p(N, 0.0);
    if (ctx.config.has("compare.p")) {
        const auto raw = ctx.config.get_list("compare.p");
        if (raw.size() != N) throw ValidationError("compare.p must have N entries");
        p = raw;
    } else {
        p[0] = 1.0;
    }

    const EpsilonComparison cmp =
        compare_epsilon(p, *F, eps_list, N, L, seq, ctx.config.get_double("grid.dt", 0.005));

    CsvTable t;
    t.header = {"eps", "distance"};
    for (std::size_t i = 0; i < cmp.eps_used.size(); ++i)
        t.rows.push_back({cmp.eps_used[i], cmp.distance[i]});
    write_csv(ctx.out_file("compare_eps.csv"), t);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["N"] = N;
    j["slope"] = cmp.slope;
    j["intercept"] = cmp.intercept;
    j["eps_used"] = cmp.eps_used;
    j["eps_skipped"] = cmp.eps_skipped;
    j["distance"] = cmp.distance;
    write_json(ctx, "summary.json", j);
    write_manifest(ctx, "compare-eps");
    return 0;
}

// -----------------------------------------------------------------------
// counterexample

int cmd_counterexample(const CliOptions& options) {
    CommandContext ctx = begin_command(options, "counterexample");
    ctx.config.restrict_keys(with(kOperatorKeys,
                                  {"eps", "nonlinearity.L", "nonlinearity.delta",
                                   "nonlinearity.R", "nonlinearity.mollifier_width",
                                   "blocker.N", "blocker.delta_rot", "seed"}));
    const EigenvalueSequence seq =
        eigenvalues(operator_from_config(ctx.config), modes_from_config(ctx.config));
    const double eps = ctx.config.get_double("eps");

    CounterexampleParams params;
    params.lipschitz = ctx.config.get_double("nonlinearity.L", 3.0);
    params.delta = ctx.config.get_double("nonlinearity.delta", 0.5);
    params.radius = ctx.config.get_double("nonlinearity.R", 10.0);
    params.mollifier_width_factor = ctx.config.get_double("nonlinearity.mollifier_width", 0.05);
    params.sampler_seed = options.seed;

    const auto F = build_counterexample(seq, eps, params);
    const double sampled = lipschitz_estimate(
        *F, {400, std::max(1.0, F->radius()), options.seed}, seq.count());

    const std::size_t want = 2 * seq.count();
    const EquilibriumSpectrum sp =
        equilibrium_spectrum(*F, F->equilibrium_plus(), eps, seq, want);
    const EquilibriumSpectrum sm =
        equilibrium_spectrum(*F, F->equilibrium_minus(), eps, seq, want);
    const std::vector<EquilibriumSpectrum> both{sp, sm};
    const HyperbolicityGaps gaps = normal_hyperbolicity_gaps(both);

    auto spectrum_csv = [&](const std::string& name, const EquilibriumSpectrum& s) {
        CsvTable t;
        t.header = {"index", "re", "im"};
        for (std::size_t i = 0; i < s.nu.size(); ++i)
            t.rows.push_back({static_cast<double>(i + 1), s.nu[i].real(), s.nu[i].imag()});
        write_csv(ctx.out_file(name), t);
    };
    spectrum_csv("spectrum_plus.csv", sp);
    spectrum_csv("spectrum_minus.csv", sm);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["radius"] = F->radius();
    j["declared_L"] = params.lipschitz;
    j["sampled_L"] = sampled;
    j["lipschitz_ok"] = sampled < params.lipschitz;
    auto to_1based_pairs = [](const std::vector<std::size_t>& c) {
        std::vector<std::size_t> out;
        for (auto i : c) out.push_back(i + 1);
        return out;
    };
    j["collisions_plus"] = to_1based_pairs(sp.collisions);
    j["collisions_minus"] = to_1based_pairs(sm.collisions);
    j["admissible_N_plus"] = gaps.admissible_per_equilibrium[0];
    j["admissible_N_minus"] = gaps.admissible_per_equilibrium[1];
    j["admissible_N_intersection"] = gaps.intersection;
    j["verdict"] = gaps.empty_intersection()
                       ? "no finite-dimensional normally hyperbolic candidate"
                       : "candidates remain";

    if (ctx.config.has("blocker.delta_rot")) {
        const auto N = static_cast<std::size_t>(ctx.config.get_int("blocker.N", 1));
        const double rot = ctx.config.get_double("blocker.delta_rot");
        const NonlinPtr B = build_gap_blocker(seq, N, rot);
        const EquilibriumSpectrum sb = equilibrium_spectrum(
            *B, std::vector<double>(seq.count(), 0.0), eps, seq, want);
        json blocker;
        blocker["delta_rot"] = rot;
        blocker["leading_re"] = sb.nu.empty() ? 0.0 : sb.nu[0].real();
        blocker["leading_im"] = sb.nu.empty() ? 0.0 : sb.nu[0].imag();
        blocker["complex_pair"] = sb.nu.size() >= 2 && sb.nu[0].imag() != 0.0 &&
                                  sb.nu[1].imag() == -sb.nu[0].imag();
        j["gap_blocker"] = blocker;
    }

    write_json(ctx, "summary.json", j);
    write_manifest(ctx, "counterexample");
    std::cout << "admissible_N_intersection = [";
    for (std::size_t i = 0; i < gaps.intersection.size(); ++i)
        std::cout << (i ? "," : "") << gaps.intersection[i];
    std::cout << "]\n";
    return 0;
}

// -----------------------------------------------------------------------
// wave1d

int cmd_wave1d(const CliOptions& options) {
    CommandContext ctx = begin_command(options, "wave1d");
    ctx.config.restrict_keys(with(kOperatorKeys,
                                  {"eps", "wave.apriori_radius", "wave.cut_factor",
                                   "wave.blend_width", "wave.forcing", "wave.f_table",
                                   "wave.f_builtin", "wave.f_scale", "wave.L_target",
                                   "wave.newton_tol", "wave.t_check", "grid.dt",
                                   "chart.axis_points", "chart.random_points", "chart.radius",
                                   "chart.cache_dir", "seed"}));

    WavePipelineConfig wcfg;
    wcfg.modes = modes_from_config(ctx.config);
    const OperatorModel op = operator_from_config(ctx.config);
    if (op.kind != OperatorKind::dirichlet1d && op.kind != OperatorKind::custom)
        throw ValidationError("wave1d: operator must be dirichlet1d");
    wcfg.operator_length = op.length;
    wcfg.eps = ctx.config.get_double("eps");
    wcfg.apriori_radius = ctx.config.get_double("wave.apriori_radius", 1.0);
    wcfg.cut_factor = ctx.config.get_double("wave.cut_factor", 2.0);
    wcfg.blend_width_factor = ctx.config.get_double("wave.blend_width", 0.1);
    wcfg.dt = ctx.config.get_double("grid.dt", 0.005);
    wcfg.t_check = ctx.config.get_double("wave.t_check", 0.5);
    if (ctx.config.has("wave.L_target"))
        wcfg.lipschitz_target = ctx.config.get_double("wave.L_target");
    wcfg.elliptic.tol = ctx.config.get_double("wave.newton_tol", 1e-12);
    if (ctx.config.has("wave.forcing")) wcfg.forcing = ctx.config.get_list("wave.forcing");
    if (ctx.config.has("wave.f_table")) {
        const CsvTable t = read_csv(ctx.config.get_string("wave.f_table"));
        std::vector<double> x, y;
        for (const auto& row : t.rows) {
            x.push_back(row[0]);
            y.push_back(row[1]);
        }
        wcfg.f = ScalarFunction::from_table(std::move(x), std::move(y));
    } else {
        const std::string builtin = ctx.config.get_string("wave.f_builtin", "sin");
        const double scale = ctx.config.get_double("wave.f_scale", 1.0);
        if (builtin == "sin")
            wcfg.f = ScalarFunction::from_callable(
                [scale](double x) { return scale * std::sin(x); }, "sin");
        else if (builtin == "zero")
            wcfg.f = ScalarFunction::from_callable([](double) { return 0.0; }, "zero");
        else
            throw ValidationError("wave1d: unknown builtin '" + builtin + "'");
    }
    wcfg.chart = chart_from_config(ctx.config, options);

    const WavePipelineReport rep = run_pipeline(wcfg);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["verdict"] = rep.verdict;
    j["lipschitz_measured"] = rep.lipschitz_measured;
    j["elliptic_residual"] = rep.elliptic_residual;
    j["admissible_N"] = rep.admissible_N;
    if (rep.has_admissible) {
        j["chosen_N"] = rep.chosen_N;
        j["theta"] = rep.theta;
        j["contraction"] = rep.contraction;
        j["invariance_max_defect"] = rep.invariance_max_defect;
        j["tracking_rate"] = rep.tracking_rate;
        j["chart"] = chart_summary(rep.chart);
    }
    write_json(ctx, "report.json", j);

    {
        CsvTable t;
        t.header = {"mode", "G"};
        for (std::size_t n = 0; n < rep.shift.size(); ++n)
            t.rows.push_back({static_cast<double>(n + 1), rep.shift[n]});
        write_csv(ctx.out_file("shift.csv"), t);
    }
    if (rep.has_admissible) {
        write_chart_csv(ctx, rep.chart, rep.chosen_N, wcfg.modes);
        const EigenvalueSequence seq =
            eigenvalues(OperatorModel::dirichlet1d(wcfg.operator_length), wcfg.modes);
        EvolveConfig ecfg;
        ecfg.dt = wcfg.dt;
        ecfg.horizon = 2.0;
        const Trajectory traj =
            evolve(rep.chart.points.front().value, *rep.nonlinearity, wcfg.eps, ecfg, seq);
        write_trajectory_csv(ctx, "trajectories.csv", traj, seq, false);
    }
    write_manifest(ctx, "wave1d");
    std::cout << "wave1d verdict: " << rep.verdict << "\n";
    return rep.has_admissible ? 0 : 3;
}

}  // namespace

int run_command(const std::string& name, const CliOptions& options) {
    try {
        if (name == "analyze") return cmd_analyze(options);
        if (name == "construct") return cmd_construct(options);
        if (name == "track") return cmd_track(options);
        if (name == "compare-eps") return cmd_compare_eps(options);
        if (name == "counterexample") return cmd_counterexample(options);
        if (name == "wave1d") return cmd_wave1d(options);
        std::cerr << "unknown command: " << name << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConditionError& e) {
        std::cerr << "conditions not satisfied: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical non-convergence: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace imtk
