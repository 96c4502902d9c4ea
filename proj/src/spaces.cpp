#include "imtk/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "imtk/errors.hpp"

namespace imtk {

TimeGrid::TimeGrid(double t_min_, double t_max_, std::size_t steps_)
    : t_min(t_min_), t_max(t_max_), steps(steps_) {
    if (!(t_min < t_max)) throw ValidationError("TimeGrid: need t_min < t_max");
    if (steps == 0) throw ValidationError("TimeGrid: need steps >= 1");
}

WeightedSignal::WeightedSignal(TimeGrid grid, std::size_t mode_count)
    : grid_(grid), modes_(mode_count), data_(mode_count * grid.nodes(), 0.0) {}

std::vector<double> WeightedSignal::snapshot(std::size_t node) const {
    std::vector<double> out(modes_);
    for (std::size_t n = 0; n < modes_; ++n) out[n] = at(n, node);
    return out;
}

bool WeightedSignal::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double x) { return std::isfinite(x); });
}

EnergyVector::EnergyVector(std::vector<double> u_, std::vector<double> v_, double eps_)
    : u(std::move(u_)), v(std::move(v_)), eps(eps_) {
    if (u.size() != v.size())
        throw ValidationError("EnergyVector: position and velocity lengths differ");
    if (eps < 0.0) throw ValidationError("EnergyVector: eps must be >= 0");
}

double hs_norm(std::span<const double> x, double s, const EigenvalueSequence& seq) {
    if (x.size() > seq.count())
        throw ValidationError("hs_norm: vector longer than eigenvalue sequence");
    double acc = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n)
        acc += std::pow(seq.lambda(n), s) * x[n] * x[n];
    return std::sqrt(acc);
}

namespace {

void check_dims(const WeightedSignal& u, const EigenvalueSequence& seq) {
    if (u.mode_count() > seq.count())
        throw ValidationError("weighted norm: signal has more modes than eigenvalue sequence");
}

}  // namespace

double weighted_l2_norm(const WeightedSignal& u, double theta, double s,
                        const EigenvalueSequence& seq) {
    check_dims(u, seq);
    const TimeGrid& g = u.grid();
    const double h = g.spacing();
    double acc = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        const double w = (k == 0 || k == g.nodes() - 1) ? 0.5 * h : h;
        double sq = 0.0;
        for (std::size_t n = 0; n < u.mode_count(); ++n) {
            const double x = u.at(n, k);
            sq += std::pow(seq.lambda(n), s) * x * x;
        }
        acc += w * std::exp(2.0 * theta * g.node(k)) * sq;
    }
    return std::sqrt(acc);
}

double weighted_sup_norm(const WeightedSignal& u, double theta, double s,
                         const EigenvalueSequence& seq) {
    check_dims(u, seq);
    const TimeGrid& g = u.grid();
    double best = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        double sq = 0.0;
        for (std::size_t n = 0; n < u.mode_count(); ++n) {
            const double x = u.at(n, k);
            sq += std::pow(seq.lambda(n), s) * x * x;
        }
        best = std::max(best, std::exp(theta * g.node(k)) * std::sqrt(sq));
    }
    return best;
}

double energy_norm(const EnergyVector& xi, const EigenvalueSequence& seq) {
    if (xi.size() > seq.count())
        throw ValidationError("energy_norm: vector longer than eigenvalue sequence");
    double acc = 0.0;
    for (std::size_t n = 0; n < xi.size(); ++n) {
        const double lam = seq.lambda(n);
        acc += xi.eps * xi.v[n] * xi.v[n];
        acc += xi.v[n] * xi.v[n] / lam;
        acc += lam * xi.u[n] * xi.u[n];
    }
    return std::sqrt(acc);
}

double energy1_norm(const EnergyVector& xi, const EigenvalueSequence& seq) {
    if (xi.size() > seq.count())
        throw ValidationError("energy1_norm: vector longer than eigenvalue sequence");
    double acc = 0.0;
    for (std::size_t n = 0; n < xi.size(); ++n) {
        const double lam = seq.lambda(n);
        acc += xi.eps * lam * xi.v[n] * xi.v[n];
        acc += lam * lam * xi.u[n] * xi.u[n];
        acc += xi.v[n] * xi.v[n];
    }
    return std::sqrt(acc);
}

EnergyVector energy_difference(const EnergyVector& a, const EnergyVector& b) {
    if (a.size() != b.size())
        throw ValidationError("energy_difference: length mismatch");
    EnergyVector d = a;
    for (std::size_t n = 0; n < d.size(); ++n) {
        d.u[n] -= b.u[n];
        d.v[n] -= b.v[n];
    }
    return d;
}

double default_window(double theta, double mu_plus_N) {
    if (!(theta > 0.0)) throw ValidationError("default_window: theta must be positive");
    const double margin = theta + mu_plus_N;  // mu_plus_N < 0, margin > 0 when admissible
    if (!(margin > 0.0))
        throw ValidationError("default_window: theta does not dominate mu_plus_N");
    return std::max(40.0 / theta, 20.0 / margin);
}

}  // namespace imtk
