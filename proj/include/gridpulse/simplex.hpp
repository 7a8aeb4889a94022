#pragma once

// Dense two-phase tableau simplex for the small LPs that the dispatch and
// market layers produce (at most a few thousand columns). Dantzig pricing
// with a Bland's-rule fallback for anti-cycling.

#include <limits>

#include "gridpulse/errors.hpp"
#include "gridpulse/types.hpp"

namespace gridpulse::opt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LpProblem {
    Vec c;       // minimize c'x
    Mat a_eq;    // a_eq * x == b_eq
    Vec b_eq;
    Mat a_ub;    // a_ub * x <= b_ub
    Vec b_ub;
    Vec lb, ub;  // elementwise bounds, +-inf allowed

    std::size_t n() const { return static_cast<std::size_t>(c.size()); }
    void validate() const;
};

struct LpSolution {
    Vec x;
    double objective = 0.0;
};

/// Solves the LP. Throws InfeasibleError / UnboundedError; plain
/// NumericError if the pivot limit is hit.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace gridpulse::opt
