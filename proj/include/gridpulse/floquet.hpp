#pragma once

// Floquet analysis of periodically pulsed linear systems
// x' = (A0 + Ap*cos(omega_p t)) x: exact monodromy by integration of the
// fundamental matrix, a first-order perturbative approximation, and the
// pulsing-participation screening bound.

#include "gridpulse/errors.hpp"
#include "gridpulse/types.hpp"

namespace gridpulse::stability {

struct PeriodicLinearSystem {
    Mat a0;
    Mat ap;
    double omega_p = 2.0 * kPi;

    double period_s() const { return 2.0 * kPi / omega_p; }
    Mat at(double t) const { return a0 + ap * std::cos(omega_p * t); }
    void validate() const;
};

struct FloquetResult {
    CVec multipliers;
    Mat monodromy;
    double spectral_radius = 0.0;
    bool stable = false;
};

/// Integrates Phi' = A(t) Phi over one period (RK4) and returns the
/// monodromy eigen-structure. Runs the step count and its double and throws
/// NumericError when the multipliers have not converged to 1e-6 relative.
FloquetResult monodromy(const PeriodicLinearSystem& sys, int steps_per_period);

/// Single-resolution monodromy matrix (no convergence check).
Mat monodromy_matrix(const PeriodicLinearSystem& sys, int steps_per_period);

struct PerturbativeResult {
    CVec multipliers;
    Mat monodromy;
    double epsilon = 0.0;        // ||Ap|| / ||A0||
    bool epsilon_warning = false;  // epsilon >= 0.3: approximation degraded
};

/// First-order monodromy approximation
///   M ~ exp(A0 T) + integral_0^T exp(A0 (T-s)) Ap exp(A0 s) cos(omega_p s) ds
/// with the correction quadrature-evaluated (composite Simpson). The error
/// against the exact monodromy scales as epsilon^2.
PerturbativeResult monodromy_perturbative(const PeriodicLinearSystem& sys, int steps);

struct PulseMargin {
    double m_pulse = 0.0;        // ||Ap||_2 / ||A0||_2
    double p_pulse_limit = 0.0;  // 2 zeta_min omega0 / m_pulse (inf when Ap = 0)
};

PulseMargin pulse_margin(const PeriodicLinearSystem& sys, double zeta_min, double omega0);

/// Largest singular value.
double operator_norm(const Mat& m);

}  // namespace gridpulse::stability
