#pragma once

// Transient energy function for multi-machine systems with pulsing-load and
// protection-trip corrections: equilibria, energy components, critical
// energy, clearing-time bisection and the clearing-time reduction fit.

#include <vector>

#include "gridpulse/errors.hpp"
#include "gridpulse/types.hpp"

namespace gridpulse::stability {

struct Generator {
    double inertia_m = 0.02;   // s^2/rad, per-unit power base
    double damping_d = 0.0;
    double p_m = 0.0;          // mechanical power, p.u.
    double emf = 1.0;          // internal EMF magnitude, p.u.
};

/// Sinusoidal pulsing injection on a machine bus: A sin(omega_p t + phase).
struct PulseTerm {
    double amplitude = 0.0;  // p.u. power
    double phase_rad = 0.0;
    double base_power = 1.0;  // reference for pulse-ratio sweeps
};

struct ProtectionTerms {
    std::vector<double> trip_powers;  // p.u. blocks already tripped
    double t_clear_s = 0.0;           // clearing time entering the C-series correction
    double healthy_voltage_from_s = 0.0;
};

struct TransientEnergyModel {
    std::vector<Generator> generators;
    Mat y_mag;    // n x n admittance magnitudes between internal nodes
    Mat y_angle;  // companion angles (pi/2 = lossless line)
    bool has_infinite_bus = false;
    double bus_emf = 1.0;
    Vec y_bus_mag;    // per-machine tie to the infinite bus
    Vec y_bus_angle;
    double omega_p = 2.0 * kPi * 10.0;
    std::vector<PulseTerm> pulse;
    ProtectionTerms protection;

    std::size_t size() const { return generators.size(); }
    void validate() const;

    /// Electrical power injected at machine i for angle vector delta.
    double electrical_power(const Vec& delta, int i) const;
    Vec electrical_power(const Vec& delta) const;
    /// Jacobian d P_e / d delta.
    Mat power_jacobian(const Vec& delta) const;
    /// Pulse injection per machine at time t (0 when no pulse terms).
    double pulse_power(int i, double t) const;
};

/// Convenience constructor for the single-machine-infinite-bus case with a
/// lossless tie (P_e = p_max sin(delta)).
TransientEnergyModel make_smib(double inertia_m, double damping_d, double p_m, double p_max);

struct Equilibria {
    Vec delta_s;  // stable equilibrium
    Vec delta_u;  // controlling unstable equilibrium
};

/// Stable equilibrium by damped Newton from a flat start; controlling UEP by
/// Newton from perturbed starts along `direction` (accelerating-power
/// direction at delta_s when empty). Residual tolerance 1e-10 (inf-norm).
Equilibria find_equilibria(const TransientEnergyModel& model, const Vec& direction = Vec());

struct EnergyComponents {
    double v_ke = 0.0;
    double v_pe = 0.0;
    double v_pulse = 0.0;
    double v_prot = 0.0;
    double total = 0.0;
};

/// Energy at (delta, omega, t) relative to delta_s. The potential term is a
/// straight-line quadrature from delta_s (path-independent for the lossless
/// test networks; transfer conductances make it path-dependent and are kept
/// small by construction).
EnergyComponents tef_energy(const TransientEnergyModel& model, const Vec& delta_s,
                            const Vec& delta, const Vec& omega, double t);

struct CriticalEnergy {
    double w_cr0 = 0.0;
    double delta_w_pulse = 0.0;
    double delta_w_protection = 0.0;
    double w_cr = 0.0;
    Equilibria equilibria;
};

/// W_cr = W_cr0 - dW_pulse - dW_protection, the pulse correction maximized
/// over one pulse period on `phase_grid` points.
CriticalEnergy critical_energy(const TransientEnergyModel& model, int phase_grid = 100);

/// Scales electrical power during and after the fault (0 = bolted fault).
struct FaultSpec {
    double pe_scale_fault = 0.0;
    double pe_scale_post = 1.0;
    double t_cr0_s = 0.0;     // traditional baseline for the closed-form estimate
    double k_p = 0.4;         // clearing-time reduction factor, [0.3, 0.5] typical
    double pulse_ratio = 0.0; // P_pulse / P_base entering the closed form
    double t_max_s = 5.0;     // bracket growth limit for the bisection
};

struct ClearingTime {
    double t_cr_exact_s = 0.0;
    double t_cr_formula_s = 0.0;
    CriticalEnergy critical;
};

/// Closed-form clearing-time estimate t_cr0 * (1 - k_p * pulse_ratio).
double clearing_time_formula(double t_cr0_s, double k_p, double pulse_ratio);

/// Exact clearing time by bisection on the fault-on trajectory energy
/// against W_cr of the post-fault system, plus the closed-form estimate.
ClearingTime critical_clearing_time(const TransientEnergyModel& model, const FaultSpec& fault);

/// Integrates the swing dynamics (RK4) with the given electrical-power scale.
struct Trajectory {
    std::vector<double> t;
    std::vector<Vec> delta;
    std::vector<Vec> omega;
};
Trajectory integrate_swing(const TransientEnergyModel& model, const Vec& delta0, const Vec& omega0,
                           double pe_scale, double t_end, double dt, double t_offset = 0.0);

struct KpFit {
    double k_p = 0.0;
    double t_cr0_s = 0.0;
    double residual = 0.0;          // RMS of the fit residual, seconds
    std::vector<double> t_cr_s;     // exact clearing time per ratio
    bool in_reported_range = true;  // k_p within [0.3, 0.5]
};

/// Fits k_p from exact clearing times at the given pulse ratios
/// (t_cr(r) = t_cr0 (1 - k_p r), least squares). Requires >= 3 distinct ratios.
KpFit calibrate_kp(const TransientEnergyModel& model, const FaultSpec& fault,
                   const std::vector<double>& pulse_ratios);

}  // namespace gridpulse::stability
