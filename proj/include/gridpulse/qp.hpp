#pragma once

// Dense primal active-set solver for strictly convex QPs
//   min 1/2 z'Hz + g'z   s.t.  A z <= b
// sized for MPC horizons of a few dozen steps.

#include "gridpulse/errors.hpp"
#include "gridpulse/types.hpp"

namespace gridpulse::opt {

struct QpProblem {
    Mat h;   // symmetric positive definite
    Vec g;
    Mat a;   // inequality rows, a*z <= b
    Vec b;

    void validate() const;
};

struct QpSolution {
    Vec z;
    double objective = 0.0;
    int iterations = 0;
};

/// Checks feasibility of z against all rows within tol.
bool qp_feasible(const QpProblem& p, const Vec& z, double tol = 1e-7);

/// Finds a feasible point via a phase-1 LP (minimum total violation).
/// Throws InfeasibleError when the constraint set is empty.
Vec qp_phase1(const QpProblem& p);

/// Solves the QP starting from a feasible point (computed internally when
/// z0 does not satisfy the constraints).
QpSolution solve_qp(const QpProblem& p, const Vec& z0);

}  // namespace gridpulse::opt
