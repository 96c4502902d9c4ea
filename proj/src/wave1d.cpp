#include "imtk/wave1d.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "imtk/detail/rng.hpp"
#include "imtk/dynamics.hpp"
#include "imtk/errors.hpp"

namespace imtk {

namespace {

/// Saturation map: identity on [-c, c], slope fading to zero over a band of
/// width w, constant past c + w.  |psi'| <= 1 everywhere.
double saturate(double u, double c, double w) {
    const double a = std::abs(u);
    if (a <= c) return u;
    // integral of (1 - smoothstep((s - c)/w)) from c to a
    const double t = std::min((a - c) / w, 1.0);
    // primitive of the quintic smoothstep: int_0^t S = t^4(2.5 - 3t + t^2)... kept numeric
    auto primitive = [](double x) {
        // int_0^x (10 s^3 - 15 s^4 + 6 s^5) ds
        return x * x * x * x * (2.5 + x * (-3.0 + x));
    };
    const double inner = w * (t - primitive(t));  // constant c + w/2 past the band
    return std::copysign(c + inner, u);
}

}  // namespace

ScalarFunction cutoff_scalar(const ScalarFunction& f, double cut_radius,
                             double blend_width_factor) {
    if (!(cut_radius > 0.0)) throw ValidationError("cutoff_scalar: radius must be positive");
    const double w = blend_width_factor * cut_radius;
    ScalarFunction base = f;
    std::ostringstream name;
    name << "cutoff(" << f.name() << ",c=" << cut_radius << ")";
    return ScalarFunction::from_callable(
        [base, cut_radius, w](double u) { return base(saturate(u, cut_radius, w)); },
        name.str());
}

double scalar_derivative_bound(const ScalarFunction& f, double range) {
    double bound = 0.0;
    const int pts = 4096;
    for (int i = 0; i <= pts; ++i) {
        const double x = -range + 2.0 * range * static_cast<double>(i) / pts;
        bound = std::max(bound, std::abs(f.derivative(x)));
    }
    return bound;
}

namespace {

/// Nemytskii image and Jacobian of u -> f(u) in coefficient space through the
/// sine basis, for the Newton solve.
struct SpatialMap {
    std::size_t modes, quad;
    double weight;
    std::vector<double> basis;

    explicit SpatialMap(const EigenvalueSequence& seq) {
        if (seq.generator.kind != OperatorKind::dirichlet1d)
            throw ValidationError("elliptic solve: needs the Dirichlet sine basis");
        modes = seq.count();
        quad = 4 * modes;
        const double length = seq.generator.length;
        weight = length / static_cast<double>(quad);
        const double amp = std::sqrt(2.0 / length);
        basis.resize(quad * modes);
        for (std::size_t j = 0; j < quad; ++j) {
            const double x = (static_cast<double>(j) + 0.5) * length / static_cast<double>(quad);
            for (std::size_t n = 0; n < modes; ++n)
                basis[j * modes + n] =
                    amp * std::sin(static_cast<double>(n + 1) * 3.141592653589793 * x / length);
        }
    }

    std::vector<double> samples(const std::vector<double>& c) const {
        std::vector<double> s(quad, 0.0);
        for (std::size_t j = 0; j < quad; ++j) {
            double acc = 0.0;
            const double* row = basis.data() + j * modes;
            for (std::size_t n = 0; n < modes; ++n) acc += row[n] * c[n];
            s[j] = acc;
        }
        return s;
    }

    std::vector<double> image(const ScalarFunction& f, const std::vector<double>& c) const {
        auto s = samples(c);
        for (double& v : s) v = f(v);
        std::vector<double> out(modes, 0.0);
        for (std::size_t j = 0; j < quad; ++j) {
            const double w = weight * s[j];
            const double* row = basis.data() + j * modes;
            for (std::size_t n = 0; n < modes; ++n) out[n] += w * row[n];
        }
        return out;
    }

    Eigen::MatrixXd jacobian(const ScalarFunction& f, const std::vector<double>& c) const {
        const auto s = samples(c);
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(modes),
                                                  static_cast<Eigen::Index>(modes));
        for (std::size_t j = 0; j < quad; ++j) {
            const double d = weight * f.derivative(s[j]);
            const double* row = basis.data() + j * modes;
            for (std::size_t n = 0; n < modes; ++n)
                for (std::size_t m = 0; m < modes; ++m)
                    J(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) +=
                        d * row[n] * row[m];
        }
        return J;
    }
};

double residual_norm(const EigenvalueSequence& seq, const SpatialMap& map,
                     const ScalarFunction& fbar, const std::vector<double>& g,
                     const std::vector<double>& c) {
    const auto img = map.image(fbar, c);
    double acc = 0.0;
    for (std::size_t n = 0; n < seq.count(); ++n) {
        const double r = seq.lambda(n) * c[n] - img[n] - g[n];
        acc += r * r;
    }
    return std::sqrt(acc);
}

bool newton_solve(const EigenvalueSequence& seq, const SpatialMap& map,
                  const ScalarFunction& fbar, const std::vector<double>& g,
                  std::vector<double>& c, const EllipticOptions& opt) {
    const auto M = static_cast<Eigen::Index>(seq.count());
    for (std::size_t it = 0; it < opt.newton_max_iter; ++it) {
        const double res = residual_norm(seq, map, fbar, g, c);
        if (res <= opt.tol) return true;
        Eigen::MatrixXd J = -map.jacobian(fbar, c);
        for (Eigen::Index n = 0; n < M; ++n) J(n, n) += seq.lambda(static_cast<std::size_t>(n));
        const auto img = map.image(fbar, c);
        Eigen::VectorXd rhs(M);
        for (Eigen::Index n = 0; n < M; ++n) {
            const auto i = static_cast<std::size_t>(n);
            rhs(n) = -(seq.lambda(i) * c[i] - img[i] - g[i]);
        }
        const Eigen::VectorXd step = J.partialPivLu().solve(rhs);
        if (!step.allFinite()) return false;
        for (Eigen::Index n = 0; n < M; ++n) c[static_cast<std::size_t>(n)] += step(n);
    }
    return residual_norm(seq, map, fbar, g, c) <= opt.tol;
}

bool fixed_point_solve(const EigenvalueSequence& seq, const SpatialMap& map,
                       const ScalarFunction& fbar, const std::vector<double>& g,
                       std::vector<double>& c, const EllipticOptions& opt) {
    for (std::size_t it = 0; it < opt.fixed_point_max_iter; ++it) {
        const auto img = map.image(fbar, c);
        for (std::size_t n = 0; n < seq.count(); ++n)
            c[n] = (img[n] + g[n]) / seq.lambda(n);
        if (residual_norm(seq, map, fbar, g, c) <= opt.tol) return true;
    }
    return false;
}

}  // namespace

std::vector<double> solve_elliptic_shift(const ScalarFunction& fbar,
                                         const std::vector<double>& g,
                                         const EigenvalueSequence& seq,
                                         const EllipticOptions& opt) {
    if (g.size() != seq.count())
        throw ValidationError("elliptic solve: forcing length must match the truncation");
    const SpatialMap map(seq);

    std::vector<std::vector<double>> seeds;
    seeds.emplace_back(seq.count(), 0.0);
    {
        std::vector<double> ainv(seq.count());
        for (std::size_t n = 0; n < seq.count(); ++n) ainv[n] = g[n] / seq.lambda(n);
        seeds.push_back(std::move(ainv));
    }
    detail::Rng rng(7);
    for (int s = 0; s < 2; ++s) {
        std::vector<double> r(seq.count());
        for (auto& x : r) x = 0.1 * rng.normal();
        seeds.push_back(std::move(r));
    }

    std::ostringstream attempted;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::vector<double> c = seeds[i];
        if (newton_solve(seq, map, fbar, g, c, opt)) return c;
        c = seeds[i];
        if (fixed_point_solve(seq, map, fbar, g, c, opt)) return c;
        attempted << (i ? ", " : "") << "seed_" << i;
    }
    throw ConvergenceError("elliptic solve: no convergence from seeds [" + attempted.str() +
                           "]");
}

NonlinPtr shift_nonlinearity(const ScalarFunction& fbar, const std::vector<double>& G,
                             const EigenvalueSequence& seq, double derivative_bound) {
    if (derivative_bound <= 0.0) {
        double gmax = 0.0;
        for (double x : G) gmax += std::abs(x);
        derivative_bound = scalar_derivative_bound(fbar, 10.0 * (1.0 + gmax));
    }
    return shifted_nemytskii(seq, fbar, G, derivative_bound);
}

namespace {

bool identically_zero(const ScalarFunction& f, double range) {
    for (int i = 0; i <= 64; ++i)
        if (f(-range + 2.0 * range * i / 64.0) != 0.0) return false;
    return true;
}

}  // namespace

WavePipelineReport run_pipeline(const WavePipelineConfig& cfg) {
    if (cfg.f.empty()) throw ValidationError("pipeline: scalar nonlinearity missing");
    const EigenvalueSequence seq =
        cfg.custom_spectrum.empty()
            ? eigenvalues(OperatorModel::dirichlet1d(cfg.operator_length), cfg.modes)
            : eigenvalues(OperatorModel::custom(cfg.custom_spectrum), cfg.modes);
    std::vector<double> g(cfg.modes, 0.0);
    if (cfg.forcing.size() > cfg.modes)
        throw ValidationError("pipeline: forcing has more modes than the truncation");
    std::copy(cfg.forcing.begin(), cfg.forcing.end(), g.begin());

    WavePipelineReport rep;

    const double cut = cfg.cut_factor * cfg.apriori_radius;
    const bool zero_f = identically_zero(cfg.f, cut * 2.0);
    if (!cfg.custom_spectrum.empty() && !zero_f)
        throw ValidationError(
            "pipeline: a custom spectrum supports only the zero scalar nonlinearity");
    const ScalarFunction fbar = cutoff_scalar(cfg.f, cut, cfg.blend_width_factor);
    rep.lipschitz_measured =
        zero_f ? 0.0
               : scalar_derivative_bound(fbar, cut * (1.0 + cfg.blend_width_factor) + 1.0);
    if (cfg.lipschitz_target &&
        rep.lipschitz_measured > *cfg.lipschitz_target * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "pipeline: measured derivative bound " << rep.lipschitz_measured
           << " exceeds the declared target " << *cfg.lipschitz_target;
        throw ValidationError(os.str());
    }
    const double L = rep.lipschitz_measured;

    NonlinPtr F;
    if (zero_f) {
        rep.shift.resize(cfg.modes);
        for (std::size_t n = 0; n < cfg.modes; ++n) rep.shift[n] = g[n] / seq.lambda(n);
        rep.elliptic_residual = 0.0;
        F = zero_nonlinearity();
    } else {
        rep.shift = solve_elliptic_shift(fbar, g, seq, cfg.elliptic);
        const SpatialMap map(seq);
        rep.elliptic_residual = residual_norm(seq, map, fbar, g, rep.shift);
        F = shift_nonlinearity(fbar, rep.shift, seq, L);
    }
    rep.nonlinearity = F;

    const auto scan = gap_scan(seq, std::max(L, 1e-14), cfg.eps);
    for (const auto& r : scan)
        if (r.N + 8 <= seq.count()) rep.admissible_N.push_back(r.N);
    rep.has_admissible = !rep.admissible_N.empty();
    if (!rep.has_admissible) {
        rep.verdict = "no admissible N at this (L, eps)";
        return rep;
    }

    rep.chosen_N = rep.admissible_N.front();
    const PerronConfig pcfg = make_perron_config(seq, rep.chosen_N, cfg.eps, L, cfg.dt);
    rep.theta = pcfg.theta;
    const SpectralGapReport gr = gap_report(seq, rep.chosen_N, cfg.eps, std::max(L, 1e-14));
    rep.contraction = gr.contraction;

    rep.chart = construct_chart(*F, pcfg, seq, cfg.chart);
    for (const auto& pt : rep.chart.points) {
        rep.max_boundary_defect = std::max(rep.max_boundary_defect, pt.boundary_defect);
        rep.max_residual = std::max(rep.max_residual, pt.residual);
    }

    EvolveConfig ecfg;
    ecfg.dt = cfg.dt;
    const InvarianceReport inv = invariance_check(rep.chart, *F, pcfg, ecfg, seq, cfg.t_check);
    rep.invariance_max_defect = inv.max_defect;

    if (cfg.eps > 0.0) {
        std::vector<double> u0(cfg.modes, 0.0), v0(cfg.modes, 0.0);
        detail::Rng rng(cfg.chart.seed + 1);
        for (std::size_t n = 0; n < cfg.modes; ++n) {
            u0[n] = 0.2 * rng.normal() / (1.0 + seq.lambda(n));
            v0[n] = 0.2 * rng.normal() / (1.0 + seq.lambda(n));
        }
        const TrackingResult tr =
            tracking_shadow(EnergyVector(u0, v0, cfg.eps), *F, pcfg, seq);
        rep.tracking_rate = tr.fitted_rate;
    }

    rep.verdict = "ok";
    return rep;
}

}  // namespace imtk
