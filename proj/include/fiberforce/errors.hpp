#pragma once

#include <stdexcept>
#include <string>

namespace fiberforce {

/// A linear system turned out singular or numerically near-singular.
/// Carries the offending condition-number estimate for diagnostics.
struct solver_error : std::runtime_error {
    double condition_number;

    explicit solver_error(const std::string& what, double cond)
        : std::runtime_error(what + " (condition number ~" + std::to_string(cond) + ")"),
          condition_number(cond) {}
};

/// An iterative scheme failed to reach its tolerance within the allowed steps.
struct convergence_error : std::runtime_error {
    std::size_t steps_used;
    double residual;

    convergence_error(const std::string& what, std::size_t steps, double res)
        : std::runtime_error(what + " after " + std::to_string(steps) +
                             " steps, residual " + std::to_string(res)),
          steps_used(steps),
          residual(res) {}
};

}  // namespace fiberforce
