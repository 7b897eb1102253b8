#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qaa {

/// Requested allocation or scan would exceed the configured memory budget.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::uint64_t required_bytes)
        : std::runtime_error(what), required_bytes(required_bytes) {}
    std::uint64_t required_bytes;
};

/// An iterative method ran out of its iteration budget before reaching the
/// requested target. Carries what was achieved so callers can report it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::uint64_t steps_taken = 0,
                     double achieved = 0.0)
        : std::runtime_error(what), steps_taken(steps_taken), achieved(achieved) {}
    std::uint64_t steps_taken; // iterations / time steps completed
    double achieved;           // residual, norm drift, or probability delta reached
};

/// Integration quality violation (norm drift, non-finite state, ...).
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File / persistence failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Process-wide memory budget for 2^n-sized allocations. Default 6 GiB.
std::uint64_t memory_budget();
void set_memory_budget(std::uint64_t bytes);

/// Throws ResourceError (naming the required bytes) if `bytes` exceeds the budget.
void require_budget(std::uint64_t bytes, const char* what);

} // namespace qaa
