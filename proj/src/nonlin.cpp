#include "imtk/nonlin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "imtk/detail/rng.hpp"
#include "imtk/errors.hpp"

namespace imtk {

namespace {

class ZeroNonlinearity final : public NonlinearityModel {
public:
    void apply(std::span<const double>, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
    }
    double declared_lipschitz() const override { return 0.0; }
    std::string describe() const override { return "zero"; }
};

class DiagonalLinearNonlinearity final : public NonlinearityModel {
public:
    explicit DiagonalLinearNonlinearity(std::vector<double> c) : c_(std::move(c)) {}

    void apply(std::span<const double> u, std::span<double> out) const override {
        if (u.size() != c_.size())
            throw ValidationError("diagonal_linear: vector length mismatch");
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = c_[i] * u[i];
    }
    double declared_lipschitz() const override {
        double m = 0.0;
        for (double x : c_) m = std::max(m, std::abs(x));
        return m;
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "diagonal_linear(max|c|=" << declared_lipschitz() << ")";
        return os.str();
    }

private:
    std::vector<double> c_;
};

class GapBlockerNonlinearity final : public NonlinearityModel {
public:
    GapBlockerNonlinearity(std::size_t N, double half_gap, double delta, std::size_t modes)
        : N_(N), half_gap_(half_gap), delta_(delta), modes_(modes) {}

    void apply(std::span<const double> u, std::span<double> out) const override {
        if (u.size() != modes_) throw ValidationError("gap_blocker: vector length mismatch");
        std::fill(out.begin(), out.end(), 0.0);
        out[N_ - 1] = -half_gap_ * u[N_ - 1] - delta_ * u[N_];
        out[N_] = delta_ * u[N_ - 1] + half_gap_ * u[N_];
    }
    double declared_lipschitz() const override { return half_gap_ + std::abs(delta_); }
    std::string describe() const override {
        std::ostringstream os;
        os << "gap_blocker(N=" << N_ << ",delta=" << delta_ << ")";
        return os.str();
    }

private:
    std::size_t N_;
    double half_gap_;
    double delta_;
    std::size_t modes_;
};

}  // namespace

NonlinPtr zero_nonlinearity() { return std::make_shared<ZeroNonlinearity>(); }

NonlinPtr diagonal_linear(std::vector<double> coefficients) {
    return std::make_shared<DiagonalLinearNonlinearity>(std::move(coefficients));
}

NonlinPtr diagonal_linear(double coefficient, std::size_t mode_count) {
    return diagonal_linear(std::vector<double>(mode_count, coefficient));
}

NonlinPtr build_gap_blocker(const EigenvalueSequence& seq, std::size_t N, double delta_rot) {
    if (N == 0 || N + 1 > seq.count())
        throw ValidationError("gap_blocker: need N + 1 <= mode count");
    if (delta_rot < 0.0) throw ValidationError("gap_blocker: delta_rot must be >= 0");
    const double half_gap = 0.5 * (seq.lambda(N) - seq.lambda(N - 1));
    return std::make_shared<GapBlockerNonlinearity>(N, half_gap, delta_rot, seq.count());
}

// ---------------------------------------------------------------------------
// scalar functions

ScalarFunction ScalarFunction::from_callable(std::function<double(double)> f, std::string name) {
    ScalarFunction sf;
    sf.fn_ = std::move(f);
    sf.name_ = std::move(name);
    return sf;
}

ScalarFunction ScalarFunction::from_table(std::vector<double> x, std::vector<double> fx) {
    if (x.size() != fx.size() || x.size() < 2)
        throw ValidationError("scalar table: need matching columns with >= 2 rows");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw ValidationError("scalar table: x column must be strictly increasing");
    ScalarFunction sf;
    sf.xs_ = std::move(x);
    sf.ys_ = std::move(fx);
    sf.name_ = "table";
    return sf;
}

double ScalarFunction::operator()(double x) const {
    if (fn_) return fn_(x);
    if (xs_.empty()) throw ValidationError("scalar function: empty");
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    if (hi == 0) hi = 1;
    if (hi == xs_.size()) hi = xs_.size() - 1;
    const std::size_t lo = hi - 1;
    const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + t * (ys_[hi] - ys_[lo]);
}

double ScalarFunction::derivative(double x) const {
    const double h = 1e-6 * (1.0 + std::abs(x));
    return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// Nemytskii realization through the sine basis

namespace {

/// Basis samples and quadrature for the Dirichlet sine family on (0, length).
struct SineTransform {
    std::size_t modes = 0;
    std::size_t quad = 0;
    double weight = 0.0;
    std::vector<double> basis;  // basis[j*modes + n] = e_{n+1}(x_j)

    SineTransform(const EigenvalueSequence& seq) {
        if (seq.generator.kind != OperatorKind::dirichlet1d)
            throw ValidationError(
                "nemytskii: pointwise nonlinearity needs the Dirichlet sine basis "
                "(operator kind dirichlet1d)");
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

    void to_samples(std::span<const double> c, std::vector<double>& s) const {
        s.assign(quad, 0.0);
        for (std::size_t j = 0; j < quad; ++j) {
            double acc = 0.0;
            const double* row = basis.data() + j * modes;
            for (std::size_t n = 0; n < modes; ++n) acc += row[n] * c[n];
            s[j] = acc;
        }
    }

    void to_coefficients(const std::vector<double>& s, std::span<double> c) const {
        for (std::size_t n = 0; n < modes; ++n) c[n] = 0.0;
        for (std::size_t j = 0; j < quad; ++j) {
            const double* row = basis.data() + j * modes;
            const double w = weight * s[j];
            for (std::size_t n = 0; n < modes; ++n) c[n] += w * row[n];
        }
    }
};

class NemytskiiNonlinearity final : public NonlinearityModel {
public:
    NemytskiiNonlinearity(const EigenvalueSequence& seq, ScalarFunction f,
                          std::vector<double> shift_coeffs, double declared)
        : transform_(seq), f_(std::move(f)), declared_(declared) {
        if (!shift_coeffs.empty()) {
            if (shift_coeffs.size() != transform_.modes)
                throw ValidationError("nemytskii: shift coefficient length mismatch");
            transform_.to_samples(shift_coeffs, shift_samples_);
            shifted_base_.resize(transform_.quad);
            for (std::size_t j = 0; j < transform_.quad; ++j)
                shifted_base_[j] = f_(shift_samples_[j]);
        } else {
            const double f0 = f_(0.0);
            if (std::abs(f0) > 1e-13)
                throw ValidationError("nemytskii: scalar function must vanish at 0");
        }
    }

    void apply(std::span<const double> u, std::span<double> out) const override {
        if (u.size() != transform_.modes)
            throw ValidationError("nemytskii: vector length mismatch");
        std::vector<double> s;
        transform_.to_samples(u, s);
        if (shift_samples_.empty()) {
            for (std::size_t j = 0; j < s.size(); ++j) s[j] = f_(s[j]);
        } else {
            for (std::size_t j = 0; j < s.size(); ++j)
                s[j] = f_(s[j] + shift_samples_[j]) - shifted_base_[j];
        }
        transform_.to_coefficients(s, out);
    }

    double declared_lipschitz() const override { return declared_; }
    std::string describe() const override {
        std::ostringstream os;
        os << (shift_samples_.empty() ? "nemytskii(" : "shifted_nemytskii(") << f_.name()
           << ",L=" << declared_ << ")";
        return os.str();
    }

private:
    SineTransform transform_;
    ScalarFunction f_;
    std::vector<double> shift_samples_;
    std::vector<double> shifted_base_;
    double declared_;
};

}  // namespace

NonlinPtr nemytskii_sine(const EigenvalueSequence& seq, ScalarFunction f,
                         double declared_lipschitz) {
    return std::make_shared<NemytskiiNonlinearity>(seq, std::move(f), std::vector<double>{},
                                                   declared_lipschitz);
}

NonlinPtr shifted_nemytskii(const EigenvalueSequence& seq, ScalarFunction f,
                            std::vector<double> shift_coeffs, double declared_lipschitz) {
    return std::make_shared<NemytskiiNonlinearity>(seq, std::move(f), std::move(shift_coeffs),
                                                   declared_lipschitz);
}

// ---------------------------------------------------------------------------
// plateau cut-off

double plateau_cutoff(double z) {
    const double s = std::clamp(2.0 * z, 0.0, 1.0);
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double plateau_cutoff_derivative(double z) {
    if (z <= 0.0 || z >= 0.5) return 0.0;
    const double s = 2.0 * z;
    return -2.0 * 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

// ---------------------------------------------------------------------------
// counterexample family

double CounterexampleNonlinearity::f1(double z) const {
    const double g1 = seq_.lambda(1) - seq_.lambda(0);
    const double slope = params_.lipschitz - params_.delta;
    auto raw = [&](double x) {
        return std::max(-0.5 * g1 * x, slope * (x - radius_) + seq_.lambda(0) * radius_);
    };
    if (std::abs(z - kink_) >= mollifier_width_) return raw(z);
    // symmetric bump convolution on the kink neighborhood; affine pieces are
    // reproduced exactly because the discrete kernel has unit mass and zero
    // first moment
    const std::size_t Q = 128;
    double mass = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < Q; ++i) {
        const double y =
            -mollifier_width_ + (static_cast<double>(i) + 0.5) * 2.0 * mollifier_width_ / Q;
        const double t = y / mollifier_width_;
        const double rho = std::exp(-1.0 / (1.0 - t * t));
        mass += rho;
        acc += rho * raw(z - y);
    }
    return acc / mass;
}

void CounterexampleNonlinearity::apply(std::span<const double> u, std::span<double> out) const {
    if (u.size() != seq_.count()) throw ValidationError("counterexample: vector length mismatch");
    out[0] = f1(u[0]);
    const double cp = plateau_cutoff(u[0] / radius_);
    const double cm = plateau_cutoff(1.0 - u[0] / radius_);
    for (std::size_t i = 1; i < u.size(); ++i) {
        const double c = f_plus_[i] * cp + f_minus_[i] * cm;
        out[i] = c == 0.0 ? 0.0 : c * std::atan(u[i]);
    }
}

std::string CounterexampleNonlinearity::describe() const {
    std::ostringstream os;
    os << "counterexample(L=" << params_.lipschitz << ",delta=" << params_.delta
       << ",R=" << radius_ << ")";
    return os.str();
}

std::vector<double> CounterexampleNonlinearity::equilibrium_plus() const {
    return std::vector<double>(seq_.count(), 0.0);
}

std::vector<double> CounterexampleNonlinearity::equilibrium_minus() const {
    std::vector<double> u(seq_.count(), 0.0);
    u[0] = radius_;
    return u;
}

namespace {

/// Upper bound for the Jacobian norm of the counterexample map over all
/// states, scanned over the coupling variable u_1.  The Jacobian is an arrow
/// matrix [[f1', 0], [c, D]]; per-coordinate extremes of |c_i| and |D_ii| are
/// combined, which dominates every admissible tail configuration.
double counterexample_jacobian_sup(const EigenvalueSequence& seq, double R,
                                   const std::vector<double>& fp,
                                   const std::vector<double>& fm,
                                   const CounterexampleNonlinearity& F) {
    const std::size_t M = seq.count();
    const double half_pi = 1.5707963267948966;
    double best = 0.0;
    for (int iu = 0; iu <= 512; ++iu) {
        const double u1 = -0.25 * R + 1.5 * R * static_cast<double>(iu) / 512.0;
        const double h = std::max(1e-7 * R, 1e-9);
        const double d1 = (F.f1(u1 + h) - F.f1(u1 - h)) / (2.0 * h);
        const double cp = plateau_cutoff(u1 / R);
        const double cm = plateau_cutoff(1.0 - u1 / R);
        const double dcp = plateau_cutoff_derivative(u1 / R) / R;
        const double dcm = -plateau_cutoff_derivative(1.0 - u1 / R) / R;
        double c_sq = 0.0, dmax = 0.0;
        for (std::size_t i = 1; i < M; ++i) {
            const double ci = (fp[i] * dcp + fm[i] * dcm) * half_pi;
            c_sq += ci * ci;
            dmax = std::max(dmax, std::abs(fp[i] * cp + fm[i] * cm));
        }
        // ||J||^2 <= largest eigenvalue of [[d1^2 + c^2, c dmax], [c dmax, dmax^2]]
        const double a = d1 * d1 + c_sq, b = dmax * dmax;
        const double s = 0.5 * (a + b) + std::sqrt(0.25 * (a - b) * (a - b) + b * c_sq);
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

}  // namespace

std::shared_ptr<const CounterexampleNonlinearity> build_counterexample(
    const EigenvalueSequence& seq, double eps, const CounterexampleParams& params) {
    const double L = params.lipschitz;
    const double delta = params.delta;
    if (!(L > 0.0) || !(delta > 0.0) || !(delta < L))
        throw ValidationError("counterexample: need 0 < delta < L");
    if (!(L - delta > seq.lambda(0))) {
        std::ostringstream os;
        os << "counterexample: precondition L - delta > lambda_1 fails (" << L - delta
           << " <= " << seq.lambda(0) << ")";
        throw ValidationError(os.str());
    }
    const CriticalIndex ncr = critical_index(seq, eps);
    if (ncr.unbounded || ncr.value < 1 || ncr.value + 1 > seq.count())
        throw ValidationError(
            "counterexample: need 1 <= n_cr and n_cr + 1 <= mode count (choose eps and the "
            "truncation accordingly)");
    double sup_gap = 0.0;
    for (std::size_t n = 1; n <= ncr.value; ++n)
        sup_gap = std::max(sup_gap, seq.lambda(n) - seq.lambda(n - 1));
    if (!(sup_gap < 2.0 * L)) {
        std::ostringstream os;
        os << "counterexample: precondition sup gap < 2L fails (" << sup_gap
           << " >= " << 2.0 * L << ")";
        throw ValidationError(os.str());
    }

    const std::size_t M = seq.count();
    std::vector<double> fp(M, 0.0), fm(M, 0.0);
    // alternating half-gap tables: pairs (2k-1, 2k) for the first equilibrium,
    // (2k, 2k+1) for the second (1-based indices)
    for (std::size_t k = 1; 2 * k - 1 <= M; ++k) {
        const std::size_t n1 = 2 * k - 1, n2 = 2 * k;
        if (n2 > M) break;
        const double half = 0.5 * (seq.lambda(n2 - 1) - seq.lambda(n1 - 1));
        fp[n1 - 1] = -half;
        fp[n2 - 1] = half;
    }
    fm[0] = L - delta;
    for (std::size_t k = 1; 2 * k <= M; ++k) {
        const std::size_t n1 = 2 * k, n2 = 2 * k + 1;
        if (n2 > M) break;
        const double half = 0.5 * (seq.lambda(n2 - 1) - seq.lambda(n1 - 1));
        fm[n1 - 1] = -half;
        fm[n2 - 1] = half;
    }
    // zero all diagonal entries past the boundary index n_cr + 1
    for (std::size_t n = ncr.value + 2; n <= M; ++n) {
        fp[n - 1] = 0.0;
        fm[n - 1] = 0.0;
    }
    // The entry at the boundary index may carry half of an uncovered gap
    // (its pair partner is zeroed); clamp it so the table norm stays below L.
    // Entries from covered gaps keep their exact half-gap values, which the
    // eigenvalue collisions rely on.
    const std::size_t nb = ncr.value + 1;
    const double clamp_mag = L - 0.5 * delta;
    if (nb >= 2) {
        const std::size_t partner_p = (nb % 2 == 1) ? nb + 1 : nb - 1;
        if (partner_p > nb && std::abs(fp[nb - 1]) > clamp_mag)
            fp[nb - 1] = std::copysign(clamp_mag, fp[nb - 1]);
        const std::size_t partner_m = (nb % 2 == 0) ? nb + 1 : nb - 1;
        if (partner_m > nb && std::abs(fm[nb - 1]) > clamp_mag)
            fm[nb - 1] = std::copysign(clamp_mag, fm[nb - 1]);
    }

    for (double R = params.radius;; R *= 2.0) {
        auto model = std::make_shared<CounterexampleNonlinearity>();
        model->seq_ = seq;
        model->params_ = params;
        model->radius_ = R;
        model->f_plus_ = fp;
        model->f_minus_ = fm;
        const double slope = L - delta;
        const double g1 = seq.lambda(1) - seq.lambda(0);
        model->kink_ = R * (slope - seq.lambda(0)) / (slope + 0.5 * g1);
        model->mollifier_width_ = params.mollifier_width_factor * R;
        if (!(model->kink_ > model->mollifier_width_) ||
            !(R - model->kink_ > model->mollifier_width_))
            throw ValidationError("counterexample: mollifier width overlaps 0 or R");
        const double measured = counterexample_jacobian_sup(seq, R, fp, fm, *model);
        if (measured < L) return model;
        if (R > 1e9 * params.radius)
            throw ConvergenceError("counterexample: radius doubling did not reach the "
                                   "target Lipschitz constant");
    }
}

// ---------------------------------------------------------------------------
// sampled Lipschitz constant

double lipschitz_estimate(const NonlinearityModel& F, const LipschitzSamplerConfig& cfg,
                          std::size_t mode_count) {
    if (cfg.count < 2) throw ValidationError("lipschitz_estimate: count must be >= 2");
    detail::Rng rng(cfg.seed);
    std::vector<double> a(mode_count, 0.0), b(mode_count, 0.0);

    double best = 0.0;
    auto probe = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double dist = 0.0;
        for (std::size_t i = 0; i < mode_count; ++i)
            dist += (x[i] - y[i]) * (x[i] - y[i]);
        if (dist == 0.0) return;
        const auto fx = F(x), fy = F(y);
        double diff = 0.0;
        for (std::size_t i = 0; i < mode_count; ++i)
            diff += (fx[i] - fy[i]) * (fx[i] - fy[i]);
        best = std::max(best, std::sqrt(diff / dist));
    };

    // basis directions at several amplitudes (exact for diagonal maps)
    for (std::size_t n = 0; n < mode_count; ++n) {
        std::fill(a.begin(), a.end(), 0.0);
        std::fill(b.begin(), b.end(), 0.0);
        for (double amp : {1e-4, 1.0, cfg.radius}) {
            b[n] = amp;
            probe(a, b);
        }
        b[n] = 0.0;
    }
    // random base points with random small and large offsets
    for (std::size_t it = 0; it < cfg.count; ++it) {
        for (std::size_t i = 0; i < mode_count; ++i) a[i] = cfg.radius * rng.normal();
        const double step = (it % 3 == 0) ? 1e-4 : (it % 3 == 1 ? 1e-1 : cfg.radius);
        for (std::size_t i = 0; i < mode_count; ++i) b[i] = a[i] + step * rng.normal();
        probe(a, b);
    }
    return best;
}

// ---------------------------------------------------------------------------
// equilibrium pencils

EquilibriumSpectrum equilibrium_spectrum(const NonlinearityModel& F,
                                         const std::vector<double>& u0, double eps,
                                         const EigenvalueSequence& seq, std::size_t count,
                                         double collision_tol) {
    const std::size_t M = seq.count();
    if (u0.size() != M) throw ValidationError("equilibrium_spectrum: state length mismatch");

    double unorm = 0.0;
    for (double x : u0) unorm += x * x;
    unorm = std::sqrt(unorm);

    const auto fu = F(u0);
    double res = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double r = seq.lambda(i) * u0[i] - fu[i];
        res += r * r;
    }
    if (std::sqrt(res) > 1e-10 * (1.0 + unorm))
        throw ValidationError("equilibrium_spectrum: input is not an equilibrium");

    // Jacobian by central differences, column by column.
    const double step = 1e-6 * (1.0 + unorm);
    std::vector<std::vector<double>> J(M, std::vector<double>(M, 0.0));
    std::vector<double> up = u0, um = u0;
    for (std::size_t k = 0; k < M; ++k) {
        up[k] += step;
        um[k] -= step;
        const auto fp = F(up), fm = F(um);
        for (std::size_t i = 0; i < M; ++i) J[i][k] = (fp[i] - fm[i]) / (2.0 * step);
        up[k] = u0[k];
        um[k] = u0[k];
    }

    double scale = 1.0;
    for (std::size_t i = 0; i < M; ++i) scale = std::max(scale, std::abs(J[i][i]));
    std::vector<std::pair<std::size_t, std::size_t>> off;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            if (i != j && std::abs(J[i][j]) > 1e-6 * scale) off.push_back({i, j});

    EquilibriumSpectrum spec;
    spec.equilibrium = u0;
    spec.collision_tol = collision_tol;
    spec.diag.resize(M);
    for (std::size_t i = 0; i < M; ++i) spec.diag[i] = J[i][i];

    std::vector<std::complex<double>> shifted;  // eigenvalues of A - J
    std::vector<bool> consumed(M, false);
    if (!off.empty()) {
        // accept exactly one adjacent 2x2 block
        if (off.size() != 2 || off[0].first != off[1].second || off[0].second != off[1].first ||
            off[0].first + 1 != off[0].second)
            throw ValidationError(
                "equilibrium_spectrum: linearization is not diagonal (beyond one adjacent "
                "2x2 block)");
        const std::size_t i = off[0].first, j = off[0].second;
        const double a = seq.lambda(i) - J[i][i], b = -J[i][j];
        const double c = -J[j][i], d = seq.lambda(j) - J[j][j];
        const double tr = 0.5 * (a + d);
        const std::complex<double> disc =
            std::sqrt(std::complex<double>(tr * tr - (a * d - b * c), 0.0));
        shifted.push_back(tr + disc);
        shifted.push_back(tr - disc);
        consumed[i] = consumed[j] = true;
    }
    for (std::size_t i = 0; i < M; ++i)
        if (!consumed[i]) shifted.push_back({seq.lambda(i) - J[i][i], 0.0});

    for (const auto alpha : shifted) {
        if (eps == 0.0) {
            spec.nu.push_back(-alpha);
            continue;
        }
        const std::complex<double> disc = std::sqrt(1.0 - 4.0 * eps * alpha);
        spec.nu.push_back((-1.0 + disc) / (2.0 * eps));
        spec.nu.push_back((-1.0 - disc) / (2.0 * eps));
    }
    std::stable_sort(spec.nu.begin(), spec.nu.end(),
                     [](const std::complex<double>& x, const std::complex<double>& y) {
                         if (x.real() != y.real()) return x.real() > y.real();
                         return x.imag() > y.imag();
                     });
    if (spec.nu.size() > count) spec.nu.resize(count);
    for (std::size_t i = 0; i + 1 < spec.nu.size(); ++i)
        if (std::abs(spec.nu[i].real() - spec.nu[i + 1].real()) <= collision_tol)
            spec.collisions.push_back(i);
    return spec;
}

HyperbolicityGaps normal_hyperbolicity_gaps(std::span<const EquilibriumSpectrum> spectra) {
    HyperbolicityGaps out;
    for (const auto& spec : spectra) {
        std::vector<std::size_t> adm;
        for (std::size_t N = 1; N + 1 <= spec.nu.size(); ++N) {
            const double re_n = spec.nu[N - 1].real();
            const double re_n1 = spec.nu[N].real();
            if (re_n < 0.0 && re_n - re_n1 > spec.collision_tol) adm.push_back(N);
        }
        out.admissible_per_equilibrium.push_back(std::move(adm));
    }
    if (!out.admissible_per_equilibrium.empty()) {
        out.intersection = out.admissible_per_equilibrium[0];
        for (std::size_t k = 1; k < out.admissible_per_equilibrium.size(); ++k) {
            std::vector<std::size_t> tmp;
            std::set_intersection(out.intersection.begin(), out.intersection.end(),
                                  out.admissible_per_equilibrium[k].begin(),
                                  out.admissible_per_equilibrium[k].end(),
                                  std::back_inserter(tmp));
            out.intersection = std::move(tmp);
        }
    }
    return out;
}

}  // namespace imtk
