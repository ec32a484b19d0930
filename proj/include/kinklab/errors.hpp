#ifndef KINKLAB_ERRORS_HPP
#define KINKLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kinklab {

/// Precondition or argument-range violation.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical routine could not reach its requested accuracy.
struct AccuracyError : std::runtime_error {
    explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solver (Newton, Gauss-Newton, root bracketing) failed to converge.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The field left the regime in which a reduced description is valid
/// (kinks too close, ill-conditioned modulation system, ...).
struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The evolved field produced non-finite or runaway values.
struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& msg, double time)
        : std::runtime_error(msg), t(time) {}
    double t;
};

/// Bad configuration file or command-line input.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kinklab

#endif
