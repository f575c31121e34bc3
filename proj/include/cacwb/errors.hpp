#ifndef CACWB_ERRORS_HPP
#define CACWB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cacwb {

/// Bad user input: malformed config, invalid policy parameters, dimension
/// mismatches. Maps to exit code 2 at the CLI.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure inside a solver (degenerate rates, non-finite input).
/// Maps to exit code 3 at the CLI.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cacwb

#endif
