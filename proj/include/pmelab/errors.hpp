#pragma once

#include <stdexcept>
#include <string>

namespace pmelab {

/// Invalid scenario, grid or parameter combination. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scalar argument outside the domain of a formula (e.g. y < -NR/4).
class OutOfRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonPositiveInput : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A snapshot containing u <= 0 where the Hopf transform is undefined.
class NonPositiveSolution : public NonPositiveInput {
public:
    using NonPositiveInput::NonPositiveInput;
};

class IndexOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class ModelNotFlat : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures raised while time stepping. Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double time = 0.0)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class PositivityLoss : public SolverError {
public:
    using SolverError::SolverError;
};

class NewtonDivergence : public SolverError {
public:
    using SolverError::SolverError;
};

} // namespace pmelab
