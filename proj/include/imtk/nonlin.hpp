#ifndef IMTK_NONLIN_HPP
#define IMTK_NONLIN_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "imtk/spectrum.hpp"

namespace imtk {

/// Globally Lipschitz map F: H -> H on coefficient vectors with F(0) = 0.
/// Models are immutable after construction; apply is pure.
class NonlinearityModel {
public:
    virtual ~NonlinearityModel() = default;

    virtual void apply(std::span<const double> u, std::span<double> out) const = 0;
    virtual double declared_lipschitz() const = 0;
    virtual std::string describe() const = 0;

    std::vector<double> operator()(std::span<const double> u) const {
        std::vector<double> out(u.size());
        apply(u, out);
        return out;
    }
};

using NonlinPtr = std::shared_ptr<const NonlinearityModel>;

NonlinPtr zero_nonlinearity();
NonlinPtr diagonal_linear(std::vector<double> coefficients);
NonlinPtr diagonal_linear(double coefficient, std::size_t mode_count);

/// Scalar function of one variable: a callable or a table with linear
/// interpolation (linear extrapolation beyond the table ends).
class ScalarFunction {
public:
    ScalarFunction() = default;
    static ScalarFunction from_callable(std::function<double(double)> f, std::string name);
    static ScalarFunction from_table(std::vector<double> x, std::vector<double> fx);

    double operator()(double x) const;
    /// Central-difference derivative, usable for tables as well.
    double derivative(double x) const;
    const std::string& name() const { return name_; }
    bool empty() const { return !fn_ && xs_.empty(); }

private:
    std::function<double(double)> fn_;
    std::vector<double> xs_, ys_;
    std::string name_;
};

/// Pointwise nonlinearity u(x) -> f(u(x)) realized through the sine basis of
/// the Dirichlet operator on an interval; midpoint quadrature with 4x
/// oversampling of the highest retained mode.
NonlinPtr nemytskii_sine(const EigenvalueSequence& seq, ScalarFunction f,
                         double declared_lipschitz);

/// Shifted variant f(u + G) - f(G); satisfies F(0) = 0 exactly.
NonlinPtr shifted_nemytskii(const EigenvalueSequence& seq, ScalarFunction f,
                            std::vector<double> shift_coeffs, double declared_lipschitz);

/// Linear block rotating the two modes around a spectral gap:
///   F e_N = -(gap/2) e_N + delta e_{N+1},  F e_{N+1} = +(gap/2) e_{N+1} - delta e_N.
NonlinPtr build_gap_blocker(const EigenvalueSequence& seq, std::size_t N, double delta_rot);

/// Parameters of the diagonal family blocking every spectral gap below the
/// critical index.
struct CounterexampleParams {
    double lipschitz = 3.0;       // L
    double delta = 0.5;           // retained margin, L - delta > lambda_1
    double radius = 10.0;         // R; doubled until the sampled constant is < L
    double mollifier_width_factor = 0.05;  // kink smoothing width, fraction of R
    std::uint64_t sampler_seed = 2026;
    std::size_t sampler_count = 400;
};

class CounterexampleNonlinearity;

std::shared_ptr<const CounterexampleNonlinearity> build_counterexample(
    const EigenvalueSequence& seq, double eps, const CounterexampleParams& params);

class CounterexampleNonlinearity : public NonlinearityModel {
public:
    void apply(std::span<const double> u, std::span<double> out) const override;
    double declared_lipschitz() const override { return params_.lipschitz; }
    std::string describe() const override;

    std::vector<double> equilibrium_plus() const;   // u = 0
    std::vector<double> equilibrium_minus() const;  // u = R e_1

    double radius() const { return radius_; }
    double f1(double z) const;
    const std::vector<double>& diag_plus() const { return f_plus_; }
    const std::vector<double>& diag_minus() const { return f_minus_; }

private:
    friend std::shared_ptr<const CounterexampleNonlinearity> build_counterexample(
        const EigenvalueSequence&, double, const CounterexampleParams&);

    EigenvalueSequence seq_;
    CounterexampleParams params_;
    double radius_ = 0.0;
    double kink_ = 0.0;            // junction of the two affine pieces of f1
    double mollifier_width_ = 0.0;
    std::vector<double> f_plus_;   // diagonal entries at u = 0
    std::vector<double> f_minus_;  // diagonal entries at u = R e_1
};

/// Smooth plateau cut-off: 1 for z <= 0, 0 for z >= 1/2 (quintic smoothstep
/// on the transition).
double plateau_cutoff(double z);
double plateau_cutoff_derivative(double z);

struct LipschitzSamplerConfig {
    std::size_t count = 200;   // random pairs
    double radius = 5.0;
    std::uint64_t seed = 1;
};

/// max over sampled pairs of ||F(u1)-F(u2)|| / ||u1-u2||.  Basis-direction
/// pairs are always included so diagonal maps are measured exactly.
double lipschitz_estimate(const NonlinearityModel& F, const LipschitzSamplerConfig& cfg,
                          std::size_t mode_count);

/// Eigenvalues nu of the pencil eps nu^2 + nu + (lambda_n - d_n) = 0 at an
/// equilibrium with diagonal linearization d_n (2x2 rotation blocks are
/// accepted and contribute complex shifts).
struct EquilibriumSpectrum {
    std::vector<double> equilibrium;
    std::vector<double> diag;                 // diagonal derivatives d_n
    std::vector<std::complex<double>> nu;     // sorted by nonincreasing real part
    std::vector<std::size_t> collisions;      // 0-based i with Re nu_i == Re nu_{i+1}
    double collision_tol = 1e-10;
};

EquilibriumSpectrum equilibrium_spectrum(const NonlinearityModel& F,
                                         const std::vector<double>& u0, double eps,
                                         const EigenvalueSequence& seq, std::size_t count,
                                         double collision_tol = 1e-10);

/// Dimensions N admitted by the strict ordering 0 > Re nu_N > Re nu_{N+1}
/// at every given equilibrium; the empty intersection is the no-candidate
/// verdict.
struct HyperbolicityGaps {
    std::vector<std::vector<std::size_t>> admissible_per_equilibrium;  // 1-based N
    std::vector<std::size_t> intersection;
    bool empty_intersection() const { return intersection.empty(); }
};

HyperbolicityGaps normal_hyperbolicity_gaps(std::span<const EquilibriumSpectrum> spectra);

}  // namespace imtk

#endif
