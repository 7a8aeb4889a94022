#pragma once

// VPP-side assets: battery storage with SoC/temperature-dependent efficiency
// and the grid Thevenin interface with current-dependent saturation.

#include "gridpulse/errors.hpp"
#include "gridpulse/types.hpp"

namespace gridpulse::vpp {

struct BessParams {
    double e_nom_wh = 0.0;
    double p_rated_w = 0.0;
    double eta_ch0 = 0.95;
    double eta_dis0 = 0.95;
    double k_ch_soc = 0.0;
    double k_ch_t_per_c = 0.0;
    double t_ref_c = 25.0;
    double soc_min = 0.0;
    double soc_max = 1.0;

    void validate() const;
    /// Rejects coefficient sets that drive efficiency to zero anywhere in the
    /// declared operating envelope.
    void validate_envelope(double temp_min_c, double temp_max_c) const;
};

struct BessState {
    double soc = 0.5;
    double temp_c = 25.0;
    double throughput_wh = 0.0;  // grid-side |energy| moved, for cycle accounting
};

/// Charge efficiency eta = eta_ch0 - k_soc*(soc-0.5)^2 - k_T*(T - T_ref),
/// clamped to (0, 1].
double charge_efficiency(const BessParams& params, double soc, double temp_c);

/// Discharge efficiency, same form with the shared coefficients.
double discharge_efficiency(const BessParams& params, double soc, double temp_c);

struct BessStepResult {
    BessState state;
    double p_actual_w = 0.0;  // realized grid-side power after clipping (charge > 0)
};

/// Advances SoC one step for a signed power command (positive charges).
/// The command is clipped to the power rating and, proportionally within the
/// step, to the SoC bounds; the realized power is returned for feedback.
BessStepResult bess_step(const BessState& state, const BessParams& params, double p_cmd_w,
                         double dt_s);

struct GridInterfaceParams {
    double v_grid_pu = 1.0;
    double r_th_pu = 0.01;
    double l_th_pu = 0.1;     // reactance at nominal frequency, p.u.
    double k_sat = 0.0;       // per (p.u. current)^2
    double f0_hz = 60.0;
    double scr = 10.0;
    double s_sc_va = 0.0;

    void validate() const;
};

/// Point-of-common-coupling voltage V = V_grid - Z_th(I)*I with
/// Z_th = R + j*X*(1 + k_sat*|I|^2), quasi-static phasors at nominal frequency.
/// Rejects |I| beyond the 5 p.u. model validity guard.
Complex pcc_voltage(const GridInterfaceParams& params, Complex i_pcc_pu);

/// Same drop with an explicit grid voltage phasor (faults scale V_grid).
Complex pcc_voltage_at(const GridInterfaceParams& params, Complex v_grid_pu, Complex i_pcc_pu);

}  // namespace gridpulse::vpp
