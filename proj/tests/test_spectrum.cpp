#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "imtk/errors.hpp"
#include "imtk/spectrum.hpp"
#include "support/helpers.hpp"

using namespace imtk;

TEST_CASE("dirichlet interval spectrum is n^2 on (0, pi)") {
    const auto seq = eigenvalues(OperatorModel::dirichlet1d(3.141592653589793), 4);
    REQUIRE(seq.count() == 4);
    CHECK(seq.lambda(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(seq.lambda(1) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(seq.lambda(2) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(seq.lambda(3) == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("custom list passes through and is validated") {
    const auto seq = eigenvalues(OperatorModel::custom({1.0, 4.0, 9.0}), 3);
    CHECK(seq.lambda(2) == 9.0);

    CHECK_THROWS_WITH_AS(eigenvalues(OperatorModel::custom({1.0, -4.0, 9.0}), 3),
                         doctest::Contains("values[1]"), ValidationError);
    CHECK_THROWS_WITH_AS(eigenvalues(OperatorModel::custom({1.0, 4.0, 3.0}), 3),
                         doctest::Contains("values[2]"), ValidationError);
    CHECK_THROWS_AS(eigenvalues(OperatorModel::custom({1.0}), 1), ValidationError);
}

TEST_CASE("sphere levels carry the squared-multiplicity pattern") {
    // brute-force listing: level k on the 3-sphere has lambda = k(k+2)
    // repeated (k+1)^2 times
    std::vector<double> expect;
    for (int k = 1; expect.size() < 20; ++k)
        for (int m = 0; m < (k + 1) * (k + 1) && expect.size() < 20; ++m)
            expect.push_back(static_cast<double>(k * (k + 2)));
    const auto seq = eigenvalues(OperatorModel::sphere(3), 20);
    for (std::size_t i = 0; i < 20; ++i) CHECK(seq.lambda(i) == expect[i]);
}

TEST_CASE("torus spectrum matches brute-force lattice enumeration") {
    std::vector<double> brute;
    for (int kx = -8; kx <= 8; ++kx)
        for (int ky = -8; ky <= 8; ++ky)
            if (kx || ky) brute.push_back(static_cast<double>(kx * kx + ky * ky));
    std::sort(brute.begin(), brute.end());
    const auto seq = eigenvalues(OperatorModel::torus(2, 1.0), 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(seq.lambda(i) == brute[i]);
}

TEST_CASE("critical index") {
    const auto seq = eigenvalues(OperatorModel::dirichlet1d(3.141592653589793), 8);
    SUBCASE("quadratic growth at eps = 0.05") {
        const auto idx = critical_index(seq, 0.05);
        CHECK_FALSE(idx.unbounded);
        CHECK(idx.value == 2);  // lambda_2 = 4 <= 5 < lambda_3 = 9
    }
    SUBCASE("parabolic limit is unbounded") {
        CHECK(critical_index(seq, 0.0).unbounded);
    }
    SUBCASE("zero when the first mode already fails") {
        const auto one = eigenvalues(OperatorModel::custom({1.0, 2.0}), 2);
        CHECK(critical_index(one, 1.0).value == 0);
    }
}

TEST_CASE("characteristic roots solve the quadratic") {
    SUBCASE("real pair") {
        const auto r = characteristic_roots(1.0, 0.05);
        CHECK(r.mu_plus.real() == doctest::Approx(-1.0557281).epsilon(1e-7));
        CHECK(r.mu_minus.real() == doctest::Approx(-18.9442719).epsilon(1e-7));
        for (const auto mu : {r.mu_plus, r.mu_minus}) {
            const auto res = 0.05 * mu * mu + mu + 1.0;
            CHECK(std::abs(res) < 1e-12 * std::abs(mu * mu));
        }
        CHECK(r.mu_minus.real() <= -1.0 / (2.0 * 0.05));
        CHECK(-1.0 / (2.0 * 0.05) <= r.mu_plus.real());
    }
    SUBCASE("complex pair") {
        const auto r = characteristic_roots(5.0, 0.1);
        CHECK(r.discriminant == doctest::Approx(-1.0));
        CHECK(r.mu_plus.real() == doctest::Approx(-5.0));
        CHECK(r.mu_plus.imag() == doctest::Approx(5.0));
        CHECK(r.mu_minus.imag() == doctest::Approx(-5.0));
    }
    SUBCASE("parabolic limit of the slow root") {
        const auto r = characteristic_roots(1.0, 1e-8);
        CHECK(r.mu_plus.real() == doctest::Approx(-1.0).epsilon(1e-7));
        const auto exact = characteristic_roots(1.0, 0.0);
        CHECK(exact.mu_plus.real() == -1.0);
        CHECK(std::isinf(exact.mu_minus.real()));
    }
}

TEST_CASE("projector coefficients") {
    const auto seq = eigenvalues(OperatorModel::dirichlet1d(3.141592653589793), 4);
    SUBCASE("parabolic limit") {
        const auto pc = projector_coefficients(seq, 2, 0.0);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(pc.a[i] == 0.0);
            CHECK(pc.b[i] == 1.0);
        }
    }
    SUBCASE("first mode at eps = 0.05") {
        const auto pc = projector_coefficients(seq, 1, 0.05);
        CHECK(pc.a[0] == doctest::Approx(0.0559017).epsilon(1e-7));
        CHECK(pc.b[0] == doctest::Approx(1.0590170).epsilon(1e-7));
        const auto r = characteristic_roots(1.0, 0.05);
        // pure-mode data u = e^{mu+ t} carries base coordinate exactly 1
        CHECK(pc.a[0] * r.mu_plus.real() + pc.b[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(pc.a[0] * r.mu_minus.real() + pc.b[0]) < 1e-13);
    }
    SUBCASE("complex range is rejected") {
        CHECK_THROWS_WITH_AS(projector_coefficients(seq, 4, 0.05),
                             doctest::Contains("real-root range"), ConditionError);
    }
}

namespace {

// independent bisection root of 2 t (eps t - 1) + s = 0 on [0, 1/(2 eps))
double theta_by_bisection(double eps, double s) {
    auto f = [&](double t) { return 2.0 * t * (eps * t - 1.0) + s; };
    double lo = 0.0, hi = eps > 0.0 ? 0.5 / eps : s;
    REQUIRE(f(lo) > 0.0);
    REQUIRE(f(hi) <= 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gap report on the reference configuration") {
    const auto seq = eigenvalues(OperatorModel::dirichlet1d(3.141592653589793), 8);
    SUBCASE("admissible at L = 1, eps = 0.05") {
        const auto rep = gap_report(seq, 1, 0.05, 1.0);
        CHECK(rep.gap == doctest::Approx(3.0));
        CHECK(rep.gap_ok);
        CHECK(rep.eps_ok);  // 13 <= 20
        REQUIRE(rep.theta.has_value());
        CHECK(*rep.theta == doctest::Approx(2.9289322).epsilon(1e-7));
        CHECK(*rep.theta ==
              doctest::Approx(theta_by_bisection(0.05, 5.0)).epsilon(1e-12));
        CHECK(rep.contraction == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(rep.n_cr.value == 2);
    }
    SUBCASE("gap condition is strict") {
        const auto rep = gap_report(seq, 1, 0.05, 2.0);
        CHECK_FALSE(rep.gap_ok);
        CHECK_FALSE(rep.admissible());
    }
    SUBCASE("eps condition fails at eps = 0.1") {
        const auto rep = gap_report(seq, 1, 0.1, 1.0);
        CHECK(rep.gap_ok);
        CHECK_FALSE(rep.eps_ok);  // 13 > 10
    }
    SUBCASE("theta absent when its equation loses real roots") {
        // 1 - 2 eps (l1 + l2) < 0 forces eps_ok false and no theta
        const auto rep = gap_report(seq, 1, 0.12, 1.0);
        CHECK_FALSE(rep.theta.has_value());
        CHECK_FALSE(rep.eps_ok);
    }
    SUBCASE("parabolic weight is the arithmetic mean") {
        const auto rep = gap_report(seq, 1, 0.0, 1.0);
        REQUIRE(rep.theta.has_value());
        CHECK(*rep.theta == 2.5);
        CHECK(rep.eps_ok);
    }
}

TEST_CASE("gap scan") {
    const auto quad = eigenvalues(OperatorModel::dirichlet1d(3.141592653589793), 10);
    SUBCASE("parabolic quadratic growth admits every N") {
        const auto scan = gap_scan(quad, 1.0, 0.0);
        REQUIRE(scan.size() == 9);
        for (std::size_t i = 0; i < scan.size(); ++i) CHECK(scan[i].N == i + 1);
    }
    SUBCASE("degenerate linear growth admits nothing") {
        std::vector<double> lin;
        for (int n = 1; n <= 10; ++n) lin.push_back(n);
        const auto seq = eigenvalues(OperatorModel::custom(lin), 10);
        CHECK(gap_scan(seq, 1.0, 0.05).empty());
    }
    SUBCASE("eps = 0.01 keeps N with 3(N+1)^2 + N^2 <= 100") {
        const auto scan = gap_scan(quad, 1.0, 0.01);
        std::vector<std::size_t> got;
        for (const auto& r : scan) got.push_back(r.N);
        CHECK(got == std::vector<std::size_t>{1, 2, 3, 4});
    }
    SUBCASE("repeated eigenvalues never pass the strict gap test") {
        const auto seq = eigenvalues(OperatorModel::custom({1.0, 4.0, 4.0, 9.0}), 4);
        const auto rep = gap_report(seq, 2, 0.0, 0.5);
        CHECK(rep.gap == 0.0);
        CHECK_FALSE(rep.gap_ok);
    }
}

TEST_CASE("root ordering chain and weight bracketing over random configurations") {
    detail::Rng rng(42);
    for (int trial = 0; trial < 120; ++trial) {
        const auto cfg = testing::random_admissible(rng);
        const auto rep = gap_report(cfg.seq, cfg.N, cfg.eps, cfg.L);
        REQUIRE(rep.theta.has_value());
        const double theta = *rep.theta;

        // ordering of the real roots up to the critical index
        const auto ncr = critical_index(cfg.seq, cfg.eps);
        double prev_minus = -1e308, prev_plus = -1.0 / (2.0 * cfg.eps);
        for (std::size_t i = 0; i < ncr.value; ++i) {
            const auto r = characteristic_roots(cfg.seq.lambda(i), cfg.eps);
            REQUIRE(r.real());
            CHECK(r.mu_minus.real() >= prev_minus - 1e-12);
            CHECK(r.mu_minus.real() <= -1.0 / (2.0 * cfg.eps) + 1e-12);
            CHECK(r.mu_plus.real() >= -1.0 / (2.0 * cfg.eps) - 1e-12);
            prev_minus = r.mu_minus.real();
        }
        for (std::size_t i = ncr.value; i-- > 0;) {
            const auto r = characteristic_roots(cfg.seq.lambda(i), cfg.eps);
            CHECK(r.mu_plus.real() >= prev_plus - 1e-12);
            prev_plus = r.mu_plus.real();
        }

        // the weight is compatible with the fast-branch decay
        CHECK(theta < 0.5 / cfg.eps);
        // and separates the slow branches across the gap
        const auto rN = characteristic_roots(cfg.seq.lambda(cfg.N - 1), cfg.eps);
        const auto rN1 = characteristic_roots(cfg.seq.lambda(cfg.N), cfg.eps);
        CHECK(-rN.mu_plus.real() < theta);
        CHECK(theta < -rN1.mu_plus.real());

        // parabolic specialization is exact
        const auto rep0 = gap_report(cfg.seq, cfg.N, 0.0, cfg.L);
        CHECK(*rep0.theta == 0.5 * (cfg.seq.lambda(cfg.N - 1) + cfg.seq.lambda(cfg.N)));
    }
}
