#include "imtk/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "imtk/errors.hpp"

namespace imtk {

OperatorModel OperatorModel::dirichlet1d(double length) {
    if (!(length > 0.0)) throw ValidationError("dirichlet1d: length must be positive");
    OperatorModel m;
    m.kind = OperatorKind::dirichlet1d;
    m.length = length;
    return m;
}

OperatorModel OperatorModel::torus(int dimension, double scale) {
    if (dimension < 1) throw ValidationError("torus: dimension must be >= 1");
    if (!(scale > 0.0)) throw ValidationError("torus: scale must be positive");
    OperatorModel m;
    m.kind = OperatorKind::torus;
    m.dimension = dimension;
    m.scale = scale;
    return m;
}

OperatorModel OperatorModel::sphere(int dimension) {
    if (dimension < 1) throw ValidationError("sphere: dimension must be >= 1");
    OperatorModel m;
    m.kind = OperatorKind::sphere;
    m.dimension = dimension;
    return m;
}

OperatorModel OperatorModel::custom(std::vector<double> values) {
    OperatorModel m;
    m.kind = OperatorKind::custom;
    m.values = std::move(values);
    return m;
}

std::string OperatorModel::describe() const {
    std::ostringstream os;
    switch (kind) {
        case OperatorKind::dirichlet1d: os << "dirichlet1d(length=" << length << ")"; break;
        case OperatorKind::torus: os << "torus(d=" << dimension << ",scale=" << scale << ")"; break;
        case OperatorKind::sphere: os << "sphere(d=" << dimension << ")"; break;
        case OperatorKind::custom: os << "custom(" << values.size() << " values)"; break;
    }
    return os.str();
}

namespace {

std::vector<double> torus_values(int d, double scale, std::size_t count) {
    // Smallest `count` values of |k|^2/scale^2 over k in Z^d \ {0}, with
    // multiplicity.  Enumerate a box [-B,B]^d; the result is complete once at
    // least `count` collected values do not exceed B^2.
    long long B = 1;
    while (true) {
        std::vector<double> sq;
        std::vector<long long> k(static_cast<std::size_t>(d), -B);
        while (true) {
            long long s = 0;
            for (long long ki : k) s += ki * ki;
            if (s > 0) sq.push_back(static_cast<double>(s));
            int pos = 0;
            while (pos < d && k[pos] == B) { k[pos] = -B; ++pos; }
            if (pos == d) break;
            ++k[pos];
        }
        std::sort(sq.begin(), sq.end());
        const double cover = static_cast<double>(B * B);
        if (sq.size() >= count && sq[count - 1] <= cover) {
            sq.resize(count);
            for (double& v : sq) v /= scale * scale;
            return sq;
        }
        B *= 2;
        if (B > (1 << 20)) throw ValidationError("torus: eigenvalue enumeration overflow");
    }
}

double binomial(long long n, long long r) {
    if (r < 0 || r > n) return 0.0;
    double v = 1.0;
    for (long long i = 1; i <= r; ++i) v
        = v * static_cast<double>(n - r + i) / static_cast<double>(i);
    return v;
}

std::vector<double> sphere_values(int d, std::size_t count) {
    // Laplace-Beltrami spectrum on S^d restricted to mean-zero functions:
    // level k >= 1 carries lambda = k(k+d-1) with multiplicity
    // C(k+d, d) - C(k-2+d, d).
    std::vector<double> out;
    for (long long k = 1; out.size() < count; ++k) {
        const double lam = static_cast<double>(k) * static_cast<double>(k + d - 1);
        const double mult = binomial(k + d, d) - binomial(k - 2 + d, d);
        const auto m = static_cast<std::size_t>(std::llround(mult));
        for (std::size_t i = 0; i < m && out.size() < count; ++i) out.push_back(lam);
        if (k > 1 << 20) throw ValidationError("sphere: eigenvalue enumeration overflow");
    }
    return out;
}

}  // namespace

EigenvalueSequence eigenvalues(const OperatorModel& model, std::size_t count) {
    if (count < 2) throw ValidationError("eigenvalues: count must be >= 2");
    EigenvalueSequence seq;
    seq.generator = model;
    switch (model.kind) {
        case OperatorKind::dirichlet1d: {
            if (!(model.length > 0.0))
                throw ValidationError("dirichlet1d: length must be positive");
            const double c = 3.141592653589793 / model.length;
            seq.values.reserve(count);
            for (std::size_t n = 1; n <= count; ++n) {
                const double kn = c * static_cast<double>(n);
                seq.values.push_back(kn * kn);
            }
            break;
        }
        case OperatorKind::torus:
            seq.values = torus_values(model.dimension, model.scale, count);
            break;
        case OperatorKind::sphere:
            seq.values = sphere_values(model.dimension, count);
            break;
        case OperatorKind::custom: {
            if (model.values.size() < count)
                throw ValidationError("custom: list shorter than requested count");
            for (std::size_t i = 0; i < count; ++i) {
                const double v = model.values[i];
                if (!(v > 0.0)) {
                    std::ostringstream os;
                    os << "custom eigenvalue list: values[" << i << "] = " << v
                       << " is not positive";
                    throw ValidationError(os.str());
                }
                if (i > 0 && v < model.values[i - 1]) {
                    std::ostringstream os;
                    os << "custom eigenvalue list: values[" << i << "] = " << v
                       << " decreases below values[" << i - 1 << "] = " << model.values[i - 1];
                    throw ValidationError(os.str());
                }
            }
            seq.values.assign(model.values.begin(), model.values.begin() + count);
            break;
        }
    }
    return seq;
}

CharacteristicRoots characteristic_roots(double lambda, double eps) {
    if (!(lambda > 0.0)) throw ValidationError("characteristic_roots: lambda must be positive");
    if (eps < 0.0) throw ValidationError("characteristic_roots: eps must be >= 0");
    CharacteristicRoots r;
    if (eps == 0.0) {
        r.mu_plus = {-lambda, 0.0};
        r.mu_minus = {-std::numeric_limits<double>::infinity(), 0.0};
        r.discriminant = 1.0;
        return r;
    }
    r.discriminant = 1.0 - 4.0 * eps * lambda;
    if (r.discriminant >= 0.0) {
        const double sq = std::sqrt(r.discriminant);
        // cancellation-free form of (-1 + sq) / (2 eps)
        r.mu_plus = {-2.0 * lambda / (1.0 + sq), 0.0};
        r.mu_minus = {(-1.0 - sq) / (2.0 * eps), 0.0};
    } else {
        const double om = std::sqrt(-r.discriminant) / (2.0 * eps);
        const double re = -1.0 / (2.0 * eps);
        r.mu_plus = {re, om};
        r.mu_minus = {re, -om};
    }
    return r;
}

CriticalIndex critical_index(const EigenvalueSequence& seq, double eps) {
    if (eps < 0.0) throw ValidationError("critical_index: eps must be >= 0");
    CriticalIndex idx;
    if (eps == 0.0) {
        idx.unbounded = true;
        idx.value = seq.count();
        return idx;
    }
    std::size_t n = 0;
    while (n < seq.count() && 4.0 * eps * seq.lambda(n) <= 1.0) ++n;
    idx.value = n;  // number of leading modes with real roots
    return idx;
}

ProjectorCoefficients projector_coefficients(const EigenvalueSequence& seq,
                                             std::size_t N, double eps) {
    if (N == 0 || N > seq.count())
        throw ValidationError("projector_coefficients: N out of range");
    ProjectorCoefficients pc;
    pc.a.resize(N);
    pc.b.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (eps == 0.0) {
            pc.a[i] = 0.0;
            pc.b[i] = 1.0;
            continue;
        }
        const double disc = 1.0 - 4.0 * eps * seq.lambda(i);
        if (!(disc > 0.0)) {
            std::ostringstream os;
            os << "projector_coefficients: N exceeds real-root range "
               << "(mode " << i + 1 << " has 1 - 4*eps*lambda = " << disc << ")";
            throw ConditionError(os.str());
        }
        const double sq = std::sqrt(disc);
        pc.a[i] = eps / sq;
        pc.b[i] = (1.0 + sq) / (2.0 * sq);
    }
    return pc;
}

SpectralGapReport gap_report(const EigenvalueSequence& seq, std::size_t N,
                             double eps, double lipschitz) {
    if (N == 0 || N + 1 > seq.count())
        throw ValidationError("gap_report: need 1 <= N and N+1 <= count");
    if (!(lipschitz > 0.0)) throw ValidationError("gap_report: L must be positive");
    if (eps < 0.0) throw ValidationError("gap_report: eps must be >= 0");

    SpectralGapReport r;
    r.N = N;
    r.eps = eps;
    r.lipschitz = lipschitz;
    r.lambda_lo = seq.lambda(N - 1);
    r.lambda_hi = seq.lambda(N);
    r.gap = r.lambda_hi - r.lambda_lo;
    r.gap_ok = r.gap > 2.0 * lipschitz;
    r.eps_ok = eps == 0.0 || eps * (3.0 * r.lambda_hi + r.lambda_lo) <= 1.0;
    r.contraction = r.gap > 0.0 ? 2.0 * lipschitz / r.gap
                                : std::numeric_limits<double>::infinity();
    r.n_cr = critical_index(seq, eps);

    const double s = r.lambda_lo + r.lambda_hi;
    if (eps == 0.0) {
        r.theta = 0.5 * s;
    } else {
        const double disc = 1.0 - 2.0 * eps * s;
        if (disc >= 0.0) r.theta = s / (1.0 + std::sqrt(disc));
        // otherwise the weight equation has no real root; eps_ok is false
        // in that regime and theta stays absent.
    }
    return r;
}

std::vector<SpectralGapReport> gap_scan(const EigenvalueSequence& seq,
                                        double lipschitz, double eps) {
    std::vector<SpectralGapReport> out;
    for (std::size_t N = 1; N + 1 <= seq.count(); ++N) {
        SpectralGapReport r = gap_report(seq, N, eps, lipschitz);
        if (r.admissible()) out.push_back(std::move(r));
    }
    return out;
}

}  // namespace imtk
