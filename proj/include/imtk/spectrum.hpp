#ifndef IMTK_SPECTRUM_HPP
#define IMTK_SPECTRUM_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace imtk {

enum class OperatorKind { dirichlet1d, torus, sphere, custom };

/// Closed-form operator model.  The library never discretizes a differential
/// operator; eigenvalues come from these models or from a user list.
struct OperatorModel {
    OperatorKind kind = OperatorKind::dirichlet1d;
    double length = 3.141592653589793;  // dirichlet1d: interval (0, length)
    int dimension = 1;                  // torus / sphere
    double scale = 1.0;                 // torus: lattice |k/scale|^2
    std::vector<double> values;         // custom list

    static OperatorModel dirichlet1d(double length);
    static OperatorModel torus(int dimension, double scale);
    static OperatorModel sphere(int dimension);
    static OperatorModel custom(std::vector<double> values);

    std::string describe() const;
};

/// Nondecreasing positive eigenvalues of A, truncated to `count()` modes.
/// Indices are 0-based; mode n of the text is values[n-1].
struct EigenvalueSequence {
    std::vector<double> values;
    OperatorModel generator;

    std::size_t count() const { return values.size(); }
    double lambda(std::size_t i) const { return values[i]; }
};

EigenvalueSequence eigenvalues(const OperatorModel& model, std::size_t count);

/// Roots of eps*mu^2 + mu + lambda = 0.
///
/// For eps == 0 the parabolic limit is represented explicitly:
/// mu_plus = -lambda and mu_minus = -infinity (the infinitely fast branch).
struct CharacteristicRoots {
    std::complex<double> mu_plus;
    std::complex<double> mu_minus;
    double discriminant = 1.0;  // 1 - 4*eps*lambda

    bool real() const { return discriminant >= 0.0; }
};

CharacteristicRoots characteristic_roots(double lambda, double eps);

/// Largest retained index n (1-based count) with 4*eps*lambda_n <= 1.
/// `unbounded` marks eps == 0 where the condition always holds.
struct CriticalIndex {
    bool unbounded = false;
    std::size_t value = 0;
};

CriticalIndex critical_index(const EigenvalueSequence& seq, double eps);

/// Coefficients of the boundary operators combining velocity and position at
/// t = 0: p_n = a_n * u_n'(0) + b_n * u_n(0) for n = 1..N.
struct ProjectorCoefficients {
    std::vector<double> a;  // velocity weight, units of time
    std::vector<double> b;  // position weight, dimensionless

    std::size_t size() const { return a.size(); }
};

ProjectorCoefficients projector_coefficients(const EigenvalueSequence& seq,
                                             std::size_t N, double eps);

/// Verdict on the spectral gap conditions
///   lambda_{N+1} - lambda_N > 2L   and   3*lambda_{N+1} + lambda_N <= 1/eps
/// together with the weight theta (smaller root of
/// 2*theta*(eps*theta - 1) + lambda_N + lambda_{N+1} = 0) and bookkeeping.
struct SpectralGapReport {
    std::size_t N = 0;
    double eps = 0.0;
    double lipschitz = 0.0;
    double lambda_lo = 0.0;  // lambda_N
    double lambda_hi = 0.0;  // lambda_{N+1}
    double gap = 0.0;
    bool gap_ok = false;
    bool eps_ok = false;
    std::optional<double> theta;  // absent when the weight equation has no real root
    double contraction = 0.0;     // kappa = 2L/gap
    CriticalIndex n_cr;

    bool admissible() const { return gap_ok && eps_ok; }
};

SpectralGapReport gap_report(const EigenvalueSequence& seq, std::size_t N,
                             double eps, double lipschitz);

/// All N with both conditions satisfied, ascending.  May be empty.
std::vector<SpectralGapReport> gap_scan(const EigenvalueSequence& seq,
                                        double lipschitz, double eps);

}  // namespace imtk

#endif
