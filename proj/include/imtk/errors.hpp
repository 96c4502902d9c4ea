#ifndef IMTK_ERRORS_HPP
#define IMTK_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace imtk {

/// Invalid input data or configuration (bad eigenvalue list, mismatched
/// dimensions, unknown config key, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A mathematical precondition does not hold (spectral gap too small,
/// relaxation parameter too large, resonance, contraction factor >= 1).
class ConditionError : public std::runtime_error {
public:
    explicit ConditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative scheme failed to converge.  Carries the increment history
/// so callers can inspect how the iteration behaved.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, std::vector<double> history = {})
        : std::runtime_error(msg), increments(std::move(history)) {}

    std::vector<double> increments;
};

}  // namespace imtk

#endif
