#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "imtk/errors.hpp"
#include "imtk/linsolve.hpp"
#include "support/helpers.hpp"

using namespace imtk;

namespace {

const auto kSeq = eigenvalues(OperatorModel::dirichlet1d(3.141592653589793), 8);

SolveContext reference_context() { return make_solve_context(kSeq, 1, 0.05, 1.0); }

TimeGrid line_grid(const SolveContext& ctx, double scale = 1.0, double dt = 0.005) {
    const double T = scale * 40.0 / ctx.theta;
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * T / dt));
    return TimeGrid(-T, T, steps);
}

TimeGrid semiaxis_grid(const SolveContext& ctx, double dt = 0.005) {
    const double T = default_window(ctx.theta, ctx.mu_plus_head());
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt));
    return TimeGrid(-T, 0.0, steps);
}

WeightedSignal decaying_mode_probe(const TimeGrid& g, std::size_t modes, std::size_t mode,
                                   double theta, double freq = 0.0) {
    WeightedSignal h(g, modes);
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        const double t = g.node(k);
        h.at(mode, k) = std::cos(freq * t) * std::exp(-theta * t);
    }
    return h;
}

/// Least-squares amplitude of the weighted response at one frequency over an
/// integer number of periods centered in the window.
double steady_amplitude(const WeightedSignal& u, std::size_t mode, double theta,
                        double freq) {
    const TimeGrid& g = u.grid();
    const double span = g.t_max - g.t_min;
    const double period = 6.283185307179586 / freq;
    const auto periods = static_cast<std::size_t>(std::floor(span / (3.0 * period)));
    REQUIRE(periods >= 3);
    const double mid = 0.5 * (g.t_min + g.t_max);
    const double lo = mid - 0.5 * static_cast<double>(periods) * period;
    const double hi = mid + 0.5 * static_cast<double>(periods) * period;
    double sc = 0.0, ss = 0.0, count = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        const double t = g.node(k);
        if (t < lo || t > hi) continue;
        const double w = std::exp(theta * t) * u.at(mode, k);
        sc += w * std::cos(freq * t);
        ss += w * std::sin(freq * t);
        count += 1.0;
    }
    return 2.0 * std::hypot(sc, ss) / count;
}

double symbol_abs(double lambda, double theta, double eps, double mid, double mu) {
    const double re = -eps * mu * mu + lambda - mid;
    const double im = (1.0 - 2.0 * eps * theta) * mu;
    return std::hypot(re, im);
}

}  // namespace

TEST_CASE("symbol minimum on the reference configuration") {
    const auto ctx = reference_context();
    SUBCASE("both gap neighbors sit at half the gap") {
        for (std::size_t n : {std::size_t{0}, std::size_t{1}}) {
            const auto rep = symbol_min(kSeq.lambda(n), ctx.theta, 0.05, 1.0, 4.0, n);
            CHECK(rep.case_tag == SymbolMinReport::MinAt::origin);
            CHECK(rep.min_abs == doctest::Approx(1.5).epsilon(1e-12));
            CHECK(std::abs(rep.min_abs - rep.grid_check) <= 1e-6 * (1.0 + rep.min_abs));
        }
    }
    SUBCASE("third mode minimizes at the parabola vertex") {
        const auto rep = symbol_min(9.0, ctx.theta, 0.05, 1.0, 4.0, 2);
        CHECK(rep.case_tag == SymbolMinReport::MinAt::vertex);
        CHECK(rep.min_abs == doctest::Approx(std::sqrt(40.0)).epsilon(1e-12));
        CHECK(rep.z_star > 0.0);
        CHECK(std::abs(rep.min_abs - rep.grid_check) <= 1e-6 * (1.0 + rep.min_abs));
    }
    SUBCASE("midpoint eigenvalue is resonant") {
        const auto rep = symbol_min(2.5, ctx.theta, 0.05, 1.0, 4.0, 0);
        CHECK(rep.min_abs == doctest::Approx(0.0));
    }
}

TEST_CASE("symbol lower bound over random admissible configurations") {
    detail::Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const auto cfg = testing::random_admissible(rng);
        const auto rep = gap_report(cfg.seq, cfg.N, cfg.eps, cfg.L);
        const double lo = cfg.seq.lambda(cfg.N - 1), hi = cfg.seq.lambda(cfg.N);
        double best = 1e308;
        std::size_t argmin = 0;
        for (std::size_t n = 0; n < cfg.seq.count(); ++n) {
            const auto s = symbol_min(cfg.seq.lambda(n), *rep.theta, cfg.eps, lo, hi, n);
            CHECK(std::abs(s.min_abs - s.grid_check) <= 1e-6 * (1.0 + s.min_abs));
            if (s.min_abs < best) {
                best = s.min_abs;
                argmin = n;
            }
        }
        CHECK(best >= 0.5 * rep.gap - 1e-9);
        CHECK((argmin == cfg.N - 1 || argmin == cfg.N));
        CHECK(best <= 0.5 * rep.gap + 1e-9 * (1.0 + rep.gap));
    }
}

TEST_CASE("full-line solve: zero forcing gives the zero orbit") {
    const auto ctx = reference_context();
    const auto res = solve_full_line(ctx, WeightedSignal(line_grid(ctx), kSeq.count()));
    CHECK(res.u_norm == 0.0);
    CHECK(res.residual_norm == 0.0);
    CHECK(res.norm_ratio == 0.0);
}

TEST_CASE("full-line solve: weighted-constant probes invert the gap midpoint") {
    const auto ctx = reference_context();
    const TimeGrid g = line_grid(ctx, 2.0);
    SUBCASE("second mode saturates the operator bound") {
        const auto h = decaying_mode_probe(g, kSeq.count(), 1, ctx.theta);
        const auto res = solve_full_line(ctx, h);
        // closed form: u = e^{-theta t} / (lambda_2 - midpoint)
        const std::size_t mid = g.nodes() / 2;
        for (std::size_t k = mid - 50; k <= mid + 50; ++k) {
            const double want = std::exp(-ctx.theta * g.node(k)) / 1.5;
            CHECK(res.u.at(1, k) == doctest::Approx(want).epsilon(1e-4));
        }
        CHECK(res.norm_ratio > 0.99 * (2.0 / ctx.gap));
        CHECK(res.norm_ratio <= (2.0 / ctx.gap) * 1.01);
        CHECK(res.residual_norm <= 1e-2 * (1.0 + res.h_norm));
    }
    SUBCASE("first mode responds with the opposite sign") {
        const auto h = decaying_mode_probe(g, kSeq.count(), 0, ctx.theta);
        const auto res = solve_full_line(ctx, h);
        const std::size_t mid = g.nodes() / 2;
        const double want = -std::exp(-ctx.theta * g.node(mid)) / 1.5;
        CHECK(res.u.at(0, mid) == doctest::Approx(want).epsilon(1e-4));
        CHECK(res.norm_ratio > 0.99 * (2.0 / ctx.gap));
    }
}

TEST_CASE("full-line solve: oscillatory probes recover the symbol gain") {
    const auto ctx = reference_context();
    const TimeGrid g = line_grid(ctx, 2.0);
    const double mid = ctx.lambda_mid;

    struct Probe {
        std::size_t mode;
        double freq;
    };
    // head (anticausal), real tail (two causal passes), complex tail (one
    // second-order pass)
    for (const Probe pr : {Probe{0, 2.0}, Probe{1, 1.5}, Probe{2, 5.477225575051661}}) {
        const auto h = decaying_mode_probe(g, kSeq.count(), pr.mode, ctx.theta, pr.freq);
        const auto res = solve_full_line(ctx, h);
        const double want = 1.0 / symbol_abs(kSeq.lambda(pr.mode), ctx.theta, 0.05, mid, pr.freq);
        const double got = steady_amplitude(res.u, pr.mode, ctx.theta, pr.freq);
        CHECK(got == doctest::Approx(want).epsilon(1e-2));
    }
}

TEST_CASE("symbol consistency: the worst mode-frequency pair is the operator norm") {
    const auto ctx = reference_context();
    const TimeGrid g = line_grid(ctx, 1.0);
    double worst_symbol = 0.0;
    std::size_t worst_mode = 0;
    double worst_freq = 0.0;
    for (std::size_t n = 0; n < kSeq.count(); ++n) {
        const auto s = symbol_min(kSeq.lambda(n), ctx.theta, ctx.eps, 1.0, 4.0, n);
        if (1.0 / s.min_abs > worst_symbol) {
            worst_symbol = 1.0 / s.min_abs;
            worst_mode = n;
            worst_freq = std::sqrt(std::max(s.z_star, 0.0));
        }
    }
    WeightedSignal h(g, kSeq.count());
    for (std::size_t k = 0; k < g.nodes(); ++k)
        h.at(worst_mode, k) = std::cos(worst_freq * g.node(k)) * std::exp(-ctx.theta * g.node(k));
    const auto res = solve_full_line(ctx, h);
    CHECK(res.norm_ratio == doctest::Approx(worst_symbol).epsilon(2e-2));
}

TEST_CASE("operator bound holds for randomized probes") {
    const auto ctx = reference_context();
    const TimeGrid g = line_grid(ctx);
    detail::Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        WeightedSignal h(g, kSeq.count());
        for (std::size_t n = 0; n < kSeq.count(); ++n) {
            const double a = rng.normal(), b = rng.normal(), w = 3.0 * rng.uniform();
            for (std::size_t k = 0; k < g.nodes(); ++k) {
                const double t = g.node(k);
                h.at(n, k) =
                    (a * std::cos(w * t) + b * std::sin(w * t)) * std::exp(-ctx.theta * t);
            }
        }
        const auto res = solve_full_line(ctx, h);
        CHECK(res.norm_ratio <= (2.0 / ctx.gap) * 1.01);
        CHECK(res.residual_norm <= 1e-2 * (1.0 + res.h_norm));
    }
}

TEST_CASE("finite-difference residual shrinks at second order") {
    const auto ctx = reference_context();
    auto residual_at = [&](double dt) {
        const TimeGrid g = line_grid(ctx, 1.0, dt);
        WeightedSignal h(g, kSeq.count());
        for (std::size_t n = 0; n < 4; ++n)
            for (std::size_t k = 0; k < g.nodes(); ++k) {
                const double t = g.node(k);
                h.at(n, k) = std::cos((1.0 + static_cast<double>(n)) * t) *
                             std::exp(-ctx.theta * t);
            }
        const auto res = solve_full_line(ctx, h);
        return res.residual_norm / (1.0 + res.h_norm);
    };
    const double r1 = residual_at(0.01);
    const double r2 = residual_at(0.005);
    CHECK(std::log2(r1 / r2) >= 1.9);
}

TEST_CASE("backward orbits") {
    const auto ctx = reference_context();
    const TimeGrid g = semiaxis_grid(ctx);
    SUBCASE("unit base point evaluates the slow exponential") {
        std::vector<double> p(kSeq.count(), 0.0);
        p[0] = 1.0;
        const auto orbit = homogeneous_backward(ctx, p, g);
        const std::size_t last = g.nodes() - 1;
        CHECK(orbit.u.at(0, last) == doctest::Approx(1.0));
        CHECK(orbit.v.at(0, last) ==
              doctest::Approx(ctx.roots[0].mu_plus.real()).epsilon(1e-14));
        CHECK(orbit.u.at(1, last) == 0.0);
    }
    SUBCASE("zero base point gives the zero orbit") {
        const auto orbit = homogeneous_backward(ctx, std::vector<double>(kSeq.count(), 0.0), g);
        CHECK(weighted_l2_norm(orbit.u, ctx.theta, 0.0, kSeq) == 0.0);
    }
    SUBCASE("boundary identity holds for random base points") {
        detail::Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> p(kSeq.count(), 0.0);
            p[0] = rng.normal();
            const auto orbit = homogeneous_backward(ctx, p, g);
            const std::size_t last = g.nodes() - 1;
            const double q = ctx.proj.a[0] * orbit.v.at(0, last) +
                             ctx.proj.b[0] * orbit.u.at(0, last);
            CHECK(q == doctest::Approx(p[0]).epsilon(1e-12));
        }
    }
    SUBCASE("tail components are rejected") {
        std::vector<double> p(kSeq.count(), 0.0);
        p[3] = 1.0;
        CHECK_THROWS_WITH_AS(homogeneous_backward(ctx, p, g),
                             doctest::Contains("tail component"), ValidationError);
    }
}

TEST_CASE("semiaxis solve") {
    const auto ctx = reference_context();
    const TimeGrid g = semiaxis_grid(ctx);
    std::vector<double> p(kSeq.count(), 0.0);
    p[0] = 0.7;

    SUBCASE("zero forcing reduces to the homogeneous orbit") {
        const auto res = solve_semiaxis(ctx, WeightedSignal(g, kSeq.count()), p);
        const auto orbit = homogeneous_backward(ctx, p, g);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.nodes(); ++k)
            worst = std::max(worst, std::abs(res.u.at(0, k) - orbit.u.at(0, k)));
        CHECK(worst == 0.0);
        CHECK(res.boundary_defect <= 1e-10 * (1.0 + 0.7));
    }
    SUBCASE("tail forcing is independent of the base point") {
        WeightedSignal h(g, kSeq.count());
        for (std::size_t k = 0; k < g.nodes(); ++k)
            h.at(4, k) = std::exp(-ctx.theta * g.node(k));
        const auto with_p = solve_semiaxis(ctx, h, p);
        const auto no_p = solve_semiaxis(ctx, h, std::vector<double>(kSeq.count(), 0.0));
        double worst = 0.0;
        for (std::size_t k = 0; k < g.nodes(); ++k)
            worst = std::max(worst, std::abs(with_p.u.at(4, k) - no_p.u.at(4, k)));
        CHECK(worst == 0.0);
        CHECK(no_p.residual_norm <= 1e-2 * (1.0 + no_p.h_norm));
        // semiaxis norm bound with C fitted from the homogeneous part
        CHECK(no_p.u_norm <= (2.0 / ctx.gap) * no_p.h_norm * 1.01);
    }
    SUBCASE("superposition is exact") {
        detail::Rng rng(9);
        WeightedSignal h(g, kSeq.count());
        for (std::size_t n = 0; n < kSeq.count(); ++n) {
            const double a = rng.normal();
            for (std::size_t k = 0; k < g.nodes(); ++k)
                h.at(n, k) = a * std::exp(-ctx.theta * g.node(k));
        }
        const auto both = solve_semiaxis(ctx, h, p);
        const auto only_h = solve_semiaxis(ctx, h, std::vector<double>(kSeq.count(), 0.0));
        const auto only_p = solve_semiaxis(ctx, WeightedSignal(g, kSeq.count()), p);
        WeightedSignal diff = both.u;
        for (std::size_t n = 0; n < kSeq.count(); ++n)
            for (std::size_t k = 0; k < g.nodes(); ++k)
                diff.at(n, k) -= only_h.u.at(n, k) + only_p.u.at(n, k);
        CHECK(weighted_l2_norm(diff, ctx.theta, 0.0, kSeq) <=
              1e-12 * (1.0 + both.u_norm));
        CHECK(both.boundary_defect <= 1e-10 * (1.0 + 0.7));
    }
    SUBCASE("grids not ending at zero are rejected") {
        CHECK_THROWS_AS(solve_semiaxis(ctx, WeightedSignal(TimeGrid(-2.0, 1.0, 10),
                                                           kSeq.count()), p),
                        ValidationError);
    }
}

TEST_CASE("parabolic limit solves first-order problems with the same interface") {
    const auto ctx = make_solve_context(kSeq, 1, 0.0, 1.0);
    CHECK(ctx.theta == 2.5);
    const TimeGrid g = semiaxis_grid(ctx);
    WeightedSignal h(g, kSeq.count());
    for (std::size_t k = 0; k < g.nodes(); ++k)
        h.at(1, k) = std::exp(-ctx.theta * g.node(k));
    const auto res = solve_semiaxis(ctx, h, std::vector<double>(kSeq.count(), 0.0));
    const std::size_t mid = g.nodes() - 200;
    const double want = std::exp(-ctx.theta * g.node(mid)) / 1.5;
    CHECK(res.u.at(1, mid) == doctest::Approx(want).epsilon(1e-4));
    // velocity is slaved: v = h - lambda u
    CHECK(res.v.at(1, mid) ==
          doctest::Approx(h.at(1, mid) - 4.0 * res.u.at(1, mid)).epsilon(1e-12));
}

TEST_CASE("refusal paths") {
    SUBCASE("gap too small") {
        CHECK_THROWS_WITH_AS(make_solve_context(kSeq, 1, 0.05, 2.0),
                             doctest::Contains("gap"), ConditionError);
    }
    SUBCASE("eps too large") {
        CHECK_THROWS_WITH_AS(make_solve_context(kSeq, 1, 0.1, 1.0),
                             doctest::Contains("1/eps"), ConditionError);
    }
}

TEST_CASE("estimate audit") {
    const auto ctx = reference_context();
    SUBCASE("homogeneous data reproduces the closed-form energy ratio") {
        const TimeGrid g = semiaxis_grid(ctx);
        std::vector<double> p(kSeq.count(), 0.0);
        p[0] = 1.0;
        const auto res = solve_semiaxis(ctx, WeightedSignal(g, kSeq.count()), p);
        const auto audit = estimate_audit(ctx, res, WeightedSignal(g, kSeq.count()), p);
        const double mu = ctx.roots[0].mu_plus.real();
        const double want = std::sqrt(0.05 * mu * mu + mu * mu / 1.0 + 1.0);
        CHECK(audit.energy_at0_ratio == doctest::Approx(want).epsilon(1e-10));
        CHECK(audit.all_finite);
    }
    SUBCASE("zero data gives zero ratios") {
        const TimeGrid g = semiaxis_grid(ctx);
        const std::vector<double> p(kSeq.count(), 0.0);
        const auto res = solve_semiaxis(ctx, WeightedSignal(g, kSeq.count()), p);
        const auto audit = estimate_audit(ctx, res, WeightedSignal(g, kSeq.count()), p);
        CHECK(audit.smoothing_ratio == 0.0);
        CHECK(audit.energy_at0_ratio == 0.0);
        CHECK(audit.regular_ratio == 0.0);
    }
    SUBCASE("ratios are stable under grid refinement") {
        auto run = [&](double dt) {
            const double T = default_window(ctx.theta, ctx.mu_plus_head());
            const auto steps = static_cast<std::size_t>(std::ceil(T / dt));
            const TimeGrid g(-T, 0.0, steps);
            WeightedSignal h(g, kSeq.count());
            detail::Rng rng(17);
            for (std::size_t n = 0; n < kSeq.count(); ++n) {
                const double a = rng.normal(), w = 1.0 + rng.uniform();
                for (std::size_t k = 0; k < g.nodes(); ++k) {
                    const double t = g.node(k);
                    h.at(n, k) = a * std::cos(w * t) * std::exp(-ctx.theta * t);
                }
            }
            std::vector<double> p(kSeq.count(), 0.0);
            p[0] = 0.4;
            const auto res = solve_semiaxis(ctx, h, p);
            return estimate_audit(ctx, res, h, p);
        };
        const auto coarse = run(0.005);
        const auto fine = run(0.0025);
        CHECK(coarse.all_finite);
        CHECK(fine.all_finite);
        CHECK(testing::rel_err(coarse.smoothing_ratio, fine.smoothing_ratio) <= 0.05);
        CHECK(testing::rel_err(coarse.energy_at0_ratio, fine.energy_at0_ratio) <= 0.05);
        CHECK(testing::rel_err(coarse.regular_ratio, fine.regular_ratio) <= 0.05);
        CHECK(testing::rel_err(coarse.energy1_at0_ratio, fine.energy1_at0_ratio) <= 0.05);
        CHECK(testing::rel_err(coarse.velocity_energy_ratio, fine.velocity_energy_ratio) <=
              0.05);
    }
}
