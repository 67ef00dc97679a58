#pragma once

#include <stdexcept>
#include <string>

namespace noma {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Frame layout violating a structural invariant (D*K products, divisibility, ordering).
class InvalidLayoutError : public std::invalid_argument {
public:
    explicit InvalidLayoutError(const std::string& what) : std::invalid_argument(what) {}
};

// A closed-form bound evaluated where its validity condition (d > 0) fails.
class ConditionViolatedError : public std::runtime_error {
public:
    explicit ConditionViolatedError(const std::string& what) : std::runtime_error(what) {}
};

// Planner target unreachable for the given parameters.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Estimator invoked on an empty sample set.
class EmptySampleError : public std::invalid_argument {
public:
    explicit EmptySampleError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace noma
