#ifndef IMTK_TESTS_HELPERS_HPP
#define IMTK_TESTS_HELPERS_HPP

#include <cmath>
#include <vector>

#include "imtk/detail/rng.hpp"
#include "imtk/spectrum.hpp"

namespace imtk::testing {

/// Random strictly increasing positive eigenvalue sequence.
inline EigenvalueSequence random_sequence(detail::Rng& rng, std::size_t count,
                                          double first_max = 4.0, double step_max = 6.0) {
    std::vector<double> v;
    double x = 0.1 + rng.uniform() * first_max;
    for (std::size_t i = 0; i < count; ++i) {
        v.push_back(x);
        x += 0.05 + rng.uniform() * step_max;
    }
    return eigenvalues(OperatorModel::custom(v), count);
}

/// Random (seq, N, eps, L) satisfying both gap conditions, with a gap at N
/// made comfortably wide.
struct AdmissibleConfig {
    EigenvalueSequence seq;
    std::size_t N;
    double eps;
    double L;
};

inline AdmissibleConfig random_admissible(detail::Rng& rng, std::size_t count = 12) {
    for (;;) {
        std::vector<double> v;
        const std::size_t N = 1 + static_cast<std::size_t>(rng.uniform() * (count / 2));
        double x = 0.2 + rng.uniform() * 3.0;
        for (std::size_t i = 0; i < count; ++i) {
            v.push_back(x);
            const double widen = (i + 1 == N) ? 2.0 + rng.uniform() * 8.0
                                              : 0.05 + rng.uniform() * 1.5;
            x += widen;
        }
        EigenvalueSequence seq = eigenvalues(OperatorModel::custom(v), count);
        const double gap = seq.lambda(N) - seq.lambda(N - 1);
        const double L = (0.1 + 0.35 * rng.uniform()) * gap;  // 2L/gap in (0.2, 0.9)
        const double eps_cap = 1.0 / (3.0 * seq.lambda(N) + seq.lambda(N - 1));
        const double eps = eps_cap * (0.1 + 0.85 * rng.uniform());
        const SpectralGapReport rep = gap_report(seq, N, eps, L);
        if (rep.admissible() && rep.theta) return {std::move(seq), N, eps, L};
    }
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

}  // namespace imtk::testing

#endif
