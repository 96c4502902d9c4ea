#ifndef IMTK_DETAIL_MODE_KERNELS_HPP
#define IMTK_DETAIL_MODE_KERNELS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace imtk::detail {

/// i0(z) = int_0^1 e^{z s} ds, i1(z) = int_0^1 e^{z s} s ds.
/// Series below |z| = 0.5, closed forms above; both ends of the double range
/// are safe (e^z underflows harmlessly for very negative z).
inline double exp_i0(double z) {
    if (std::abs(z) <= 0.5) {
        double term = 1.0, acc = 1.0;  // sum z^m/(m+1)!
        for (int m = 1; m <= 24; ++m) {
            term *= z / static_cast<double>(m + 1);
            acc += term;
            if (std::abs(term) < 1e-20 * std::abs(acc)) break;
        }
        return acc;
    }
    return std::expm1(z) / z;
}

inline double exp_i1(double z) {
    if (std::abs(z) <= 0.5) {
        double acc = 0.5;  // sum z^m/(m! (m+2))
        double fact = 1.0;
        double zp = 1.0;
        for (int m = 1; m <= 24; ++m) {
            fact *= static_cast<double>(m);
            zp *= z;
            const double t = zp / (fact * static_cast<double>(m + 2));
            acc += t;
            if (std::abs(t) < 1e-20 * std::abs(acc)) break;
        }
        return acc;
    }
    return (z * std::exp(z) - std::expm1(z)) / (z * z);
}

/// One first-order factor (d/dt - mu) w = f integrated in the causal
/// direction with zero inflow at the left end.  Exact for piecewise-linear f.
inline void causal_pass(double mu, double h, std::span<const double> f,
                        std::span<double> w) {
    const double z = mu * h;
    const double e = std::exp(z);
    const double c0 = exp_i1(z);             // weight of f_k
    const double c1 = exp_i0(z) - exp_i1(z); // weight of f_{k+1}
    w[0] = 0.0;
    for (std::size_t k = 0; k + 1 < f.size(); ++k)
        w[k + 1] = e * w[k] + h * (c0 * f[k] + c1 * f[k + 1]);
}

/// Same factor integrated anticausally from a given inflow value at the
/// right end.
inline void anticausal_pass(double mu, double h, std::span<const double> f,
                            std::span<double> w, double inflow = 0.0) {
    const double z = -mu * h;
    const double e = std::exp(z);
    const double c0 = exp_i0(z) - exp_i1(z);  // weight of f_k
    const double c1 = exp_i1(z);              // weight of f_{k+1}
    const std::size_t K = f.size() - 1;
    w[K] = inflow;
    for (std::size_t k = K; k-- > 0;)
        w[k] = e * w[k + 1] - h * (c0 * f[k] + c1 * f[k + 1]);
}

/// Exact propagator of the second-order mode eps y'' + y' + lambda y = f over
/// one step, valid for real, complex and (near-)double characteristic roots.
/// Forcing is taken piecewise linear between nodes.
struct ModePropagator {
    // E = [[e11, e12], [e21, e22]] maps (y, y') over one step of length h.
    double e11 = 1.0, e12 = 0.0, e21 = 0.0, e22 = 1.0;
    double lambda = 0.0;
    double eps = 0.0;
    double h = 0.0;

    ModePropagator() = default;

    ModePropagator(double lambda_, double eps_, double h_) : lambda(lambda_), eps(eps_), h(h_) {
        const double disc = 1.0 - 4.0 * eps * lambda;
        const double alpha = -0.5 / eps;
        const double s2 = -disc / (4.0 * eps * eps);  // omega^2, negative for real roots
        double coslike, sinclike;                     // e^{alpha h} cos(omega h), e^{alpha h} sin(omega h)/omega
        if (std::abs(s2) * h * h < 1e-8) {
            const double x = s2 * h * h;
            const double ea = std::exp(alpha * h);
            coslike = ea * (1.0 - x / 2.0 + x * x / 24.0);
            sinclike = ea * h * (1.0 - x / 6.0 + x * x / 120.0);
        } else if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            const double mp = -2.0 * lambda / (1.0 + sq);  // mu_plus
            const double mm = (-1.0 - sq) / (2.0 * eps);   // mu_minus
            const double ep = std::exp(mp * h);
            const double em = std::exp(mm * h);
            coslike = 0.5 * (ep + em);
            sinclike = (ep - em) / (mp - mm);
        } else {
            const double om = std::sqrt(-disc) / (2.0 * eps);
            const double ea = std::exp(alpha * h);
            coslike = ea * std::cos(om * h);
            sinclike = ea * std::sin(om * h) / om;
        }
        e11 = coslike - alpha * sinclike;
        e12 = sinclike;
        e21 = -(lambda / eps) * sinclike;
        e22 = coslike + alpha * sinclike;
    }

    /// Advance the state over one step with forcing values (f0, f1) at the
    /// step's endpoints.
    std::array<double, 2> step(double y, double dy, double f0, double f1) const {
        const double b = (f1 - f0) / h;
        // particular solution a/lambda + b t/lambda - b/lambda^2 on the step
        const double p0 = f0 / lambda - b / (lambda * lambda);
        const double dp = b / lambda;
        const double ph = f1 / lambda - b / (lambda * lambda);
        const double z0 = y - p0;
        const double z1 = dy - dp;
        return {e11 * z0 + e12 * z1 + ph, e21 * z0 + e22 * z1 + dp};
    }

    /// Response (y(h), y'(h)) to a unit constant forcing from a zero state.
    std::array<double, 2> unit_response() const {
        return {(1.0 - e11) / lambda, -e21 / lambda};
    }
};

}  // namespace imtk::detail

#endif
