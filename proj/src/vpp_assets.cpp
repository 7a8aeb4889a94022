#include "gridpulse/vpp_assets.hpp"

#include <algorithm>
#include <cmath>

namespace gridpulse::vpp {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

double efficiency_at(const BessParams& p, double soc, double temp_c) {
    const double d = soc - 0.5;
    return p.eta_ch0 - p.k_ch_soc * d * d - p.k_ch_t_per_c * (temp_c - p.t_ref_c);
}

}  // namespace

void BessParams::validate() const {
    require(e_nom_wh > 0.0, "BessParams.e_nom_wh must be > 0");
    require(p_rated_w > 0.0, "BessParams.p_rated_w must be > 0");
    require(eta_ch0 > 0.0 && eta_ch0 <= 1.0, "BessParams.eta_ch0 must be in (0,1]");
    require(eta_dis0 > 0.0 && eta_dis0 <= 1.0, "BessParams.eta_dis0 must be in (0,1]");
    require(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0,
            "BessParams SoC bounds must satisfy 0 <= soc_min < soc_max <= 1");
}

void BessParams::validate_envelope(double temp_min_c, double temp_max_c) const {
    validate();
    // Quadratic in soc: extremes sit at the soc bounds; linear in temperature.
    for (double soc : {soc_min, soc_max}) {
        for (double temp : {temp_min_c, temp_max_c}) {
            const double d = soc - 0.5;
            const double eta_ch = eta_ch0 - k_ch_soc * d * d - k_ch_t_per_c * (temp - t_ref_c);
            const double eta_dis = eta_dis0 - k_ch_soc * d * d - k_ch_t_per_c * (temp - t_ref_c);
            require(eta_ch > 0.0 && eta_dis > 0.0,
                    "BESS efficiency drops to <= 0 inside the operating envelope");
        }
    }
}

double charge_efficiency(const BessParams& params, double soc, double temp_c) {
    require(soc >= 0.0 && soc <= 1.0, "charge_efficiency: soc must be in [0,1]");
    const double value = std::min(1.0, efficiency_at(params, soc, temp_c));
    if (value <= 0.0) throw ValidationError("charge efficiency <= 0 at requested (soc, temp)");
    return value;
}

double discharge_efficiency(const BessParams& params, double soc, double temp_c) {
    require(soc >= 0.0 && soc <= 1.0, "discharge_efficiency: soc must be in [0,1]");
    const double d = soc - 0.5;
    const double eta =
        params.eta_dis0 - params.k_ch_soc * d * d - params.k_ch_t_per_c * (temp_c - params.t_ref_c);
    const double value = std::min(1.0, eta);
    if (value <= 0.0) throw ValidationError("discharge efficiency <= 0 at requested (soc, temp)");
    return value;
}

BessStepResult bess_step(const BessState& state, const BessParams& params, double p_cmd_w,
                         double dt_s) {
    if (!std::isfinite(p_cmd_w)) throw ValidationError("bess_step: command must be finite");
    BessStepResult out;
    out.state = state;
    if (dt_s <= 0.0 || p_cmd_w == 0.0) return out;

    const double dt_h = dt_s / 3600.0;
    if (p_cmd_w > 0.0) {
        const double eta = charge_efficiency(params, state.soc, state.temp_c);
        double p = std::min(p_cmd_w, params.p_rated_w);
        // clip so SoC lands on soc_max at most
        const double headroom_wh = (params.soc_max - state.soc) * params.e_nom_wh;
        p = std::min(p, std::max(0.0, headroom_wh / (eta * dt_h)));
        out.state.soc = state.soc + eta * p * dt_h / params.e_nom_wh;
        out.p_actual_w = p;
    } else {
        const double eta = discharge_efficiency(params, state.soc, state.temp_c);
        double p = std::min(-p_cmd_w, params.p_rated_w);
        const double available_wh = (state.soc - params.soc_min) * params.e_nom_wh;
        p = std::min(p, std::max(0.0, available_wh * eta / dt_h));
        out.state.soc = state.soc - p * dt_h / (eta * params.e_nom_wh);
        out.p_actual_w = -p;
    }
    out.state.soc = std::clamp(out.state.soc, params.soc_min, params.soc_max);
    out.state.throughput_wh = state.throughput_wh + std::abs(out.p_actual_w) * dt_h;
    return out;
}

void GridInterfaceParams::validate() const {
    require(r_th_pu >= 0.0 && l_th_pu >= 0.0, "GridInterfaceParams impedances must be >= 0");
    require(scr > 0.0, "GridInterfaceParams.scr must be > 0");
    require(f0_hz > 0.0, "GridInterfaceParams.f0_hz must be > 0");
    require(k_sat >= 0.0, "GridInterfaceParams.k_sat must be >= 0");
}

Complex pcc_voltage_at(const GridInterfaceParams& params, Complex v_grid_pu, Complex i_pcc_pu) {
    const double i_mag = std::abs(i_pcc_pu);
    if (i_mag > 5.0) throw ValidationError("pcc_voltage: |I| beyond 5 p.u. validity guard");
    const Complex z_th(params.r_th_pu, params.l_th_pu * (1.0 + params.k_sat * i_mag * i_mag));
    return v_grid_pu - z_th * i_pcc_pu;
}

Complex pcc_voltage(const GridInterfaceParams& params, Complex i_pcc_pu) {
    return pcc_voltage_at(params, Complex(params.v_grid_pu, 0.0), i_pcc_pu);
}

}  // namespace gridpulse::vpp
