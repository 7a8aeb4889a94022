#pragma once

#include <stdexcept>
#include <string>

namespace gridpulse {

/// Invalid parameters, states or scenario content. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failure at run time (divergence, non-convergence, failed bracket).
/// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Optimization problem has no feasible point under the hard constraints.
class InfeasibleError : public NumericError {
public:
    explicit InfeasibleError(const std::string& what) : NumericError(what) {}
};

/// Optimization problem is unbounded below (misconfigured costs/penalties).
class UnboundedError : public NumericError {
public:
    explicit UnboundedError(const std::string& what) : NumericError(what) {}
};

}  // namespace gridpulse
