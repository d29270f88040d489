#ifndef CATDIMER_ERRORS_HPP
#define CATDIMER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace catdimer {

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& msg) : std::runtime_error("dimension mismatch: " + msg) {}
};

struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& msg) : std::runtime_error("truncation inadequate: " + msg) {}
};

struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& msg) : std::runtime_error("degenerate input: " + msg) {}
};

struct DivergentSeries : std::runtime_error {
    explicit DivergentSeries(const std::string& msg) : std::runtime_error("divergent series: " + msg) {}
};

struct SingularParameter : std::runtime_error {
    explicit SingularParameter(const std::string& msg) : std::runtime_error("singular parameter: " + msg) {}
};

struct SolverFailure : std::runtime_error {
    explicit SolverFailure(const std::string& msg) : std::runtime_error("solver failure: " + msg) {}
};

struct NonUniqueSteadyState : std::runtime_error {
    explicit NonUniqueSteadyState(const std::string& msg) : std::runtime_error("non-unique steady state: " + msg) {}
};

struct NonPSDInput : std::runtime_error {
    explicit NonPSDInput(const std::string& msg) : std::runtime_error("input not positive semidefinite: " + msg) {}
};

struct ManifoldLeakage : std::runtime_error {
    explicit ManifoldLeakage(const std::string& msg) : std::runtime_error("manifold leakage: " + msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

} // namespace catdimer

#endif // CATDIMER_ERRORS_HPP
