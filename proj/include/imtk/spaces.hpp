#ifndef IMTK_SPACES_HPP
#define IMTK_SPACES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "imtk/spectrum.hpp"

namespace imtk {

/// Uniform grid on [t_min, t_max] with nodes t_min + k*h, h = (t_max-t_min)/steps.
struct TimeGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t steps = 1;

    TimeGrid() = default;
    TimeGrid(double t_min, double t_max, std::size_t steps);

    double spacing() const { return (t_max - t_min) / static_cast<double>(steps); }
    std::size_t nodes() const { return steps + 1; }
    double node(std::size_t k) const { return t_min + static_cast<double>(k) * spacing(); }
};

/// Per-mode coefficient arrays u_n(t_k) representing an H-valued function of
/// time.  Raw coefficients are stored unweighted; exponential weights are
/// applied inside the norm routines.
class WeightedSignal {
public:
    WeightedSignal() = default;
    WeightedSignal(TimeGrid grid, std::size_t mode_count);

    const TimeGrid& grid() const { return grid_; }
    std::size_t mode_count() const { return modes_; }

    double& at(std::size_t mode, std::size_t node) { return data_[mode * grid_.nodes() + node]; }
    double at(std::size_t mode, std::size_t node) const { return data_[mode * grid_.nodes() + node]; }

    std::span<double> mode(std::size_t n) { return {data_.data() + n * grid_.nodes(), grid_.nodes()}; }
    std::span<const double> mode(std::size_t n) const {
        return {data_.data() + n * grid_.nodes(), grid_.nodes()};
    }

    /// Coefficient vector at one node (one column), length mode_count.
    std::vector<double> snapshot(std::size_t node) const;

    bool all_finite() const;

private:
    TimeGrid grid_;
    std::size_t modes_ = 0;
    std::vector<double> data_;
};

/// State pair xi = (u, du/dt) with the relaxation parameter it belongs to.
struct EnergyVector {
    std::vector<double> u;  // position coefficients
    std::vector<double> v;  // velocity coefficients
    double eps = 0.0;

    EnergyVector() = default;
    EnergyVector(std::vector<double> u, std::vector<double> v, double eps);

    std::size_t size() const { return u.size(); }
};

/// sqrt(sum_n lambda_n^s x_n^2)
double hs_norm(std::span<const double> x, double s, const EigenvalueSequence& seq);

/// Trapezoid quadrature of int e^{2 theta t} ||u(t)||_{H^s}^2 dt over the grid.
double weighted_l2_norm(const WeightedSignal& u, double theta, double s,
                        const EigenvalueSequence& seq);

/// max_k e^{theta t_k} ||u(t_k)||_{H^s}
double weighted_sup_norm(const WeightedSignal& u, double theta, double s,
                         const EigenvalueSequence& seq);

/// sqrt(eps ||v||_H^2 + ||v||_{H^-1}^2 + ||u||_{H^1}^2); the eps = 0 case is
/// the H^1 x H^-1 norm.
double energy_norm(const EnergyVector& xi, const EigenvalueSequence& seq);

/// sqrt(eps ||v||_{H^1}^2 + ||u||_{H^2}^2 + ||v||_H^2)
double energy1_norm(const EnergyVector& xi, const EigenvalueSequence& seq);

EnergyVector energy_difference(const EnergyVector& a, const EnergyVector& b);

/// Backward-window length for truncating the negative half line:
///   T = max(40/theta, 20/(theta + mu_plus_N)).
/// Both exponents push the neglected tails below double-precision noise
/// relative to the retained mass.
double default_window(double theta, double mu_plus_N);

}  // namespace imtk

#endif
