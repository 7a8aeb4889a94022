#include "gridpulse/load_model.hpp"

#include <algorithm>
#include <cmath>

namespace gridpulse::load {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace

void AcceleratorClass::validate() const {
    require(tdp_w > 0.0, "AcceleratorClass.tdp_w must be > 0 (" + name + ")");
    require(idle_fraction >= 0.0 && idle_fraction < 1.0,
            "AcceleratorClass.idle_fraction must be in [0,1) (" + name + ")");
    require(dvfs_min > 0.0 && dvfs_min <= 1.0,
            "AcceleratorClass.dvfs_min must be in (0,1] (" + name + ")");
}

void RackGroup::validate() const {
    accel_class.validate();
    require(node_count >= 1, "RackGroup.node_count must be >= 1");
    require(accels_per_node >= 1, "RackGroup.accels_per_node must be >= 1");
    require(rho >= 0.0 && rho <= 1.0, "RackGroup.rho must be in [0,1]");
}

double WorkloadClass::defer_factor(double tau_s) const {
    if (deferability.empty())
        throw ValidationError("WorkloadClass '" + name + "' has no deferability anchors");
    if (tau_s <= 0.0) throw ValidationError("flexibility duration must be > 0");
    auto hi = deferability.lower_bound(tau_s);
    if (hi == deferability.begin()) return hi->second;      // below first anchor
    if (hi == deferability.end()) return std::prev(hi)->second;  // beyond last anchor
    auto lo = std::prev(hi);
    if (hi->first == lo->first) return lo->second;
    // log-time linear interpolation between anchors
    const double w = (std::log(tau_s) - std::log(lo->first)) /
                     (std::log(hi->first) - std::log(lo->first));
    return lo->second + w * (hi->second - lo->second);
}

double WorkloadClass::perf_loss(double /*t_s*/, double tau_s) const {
    return std::min(1.0, perf_loss_per_hour * tau_s / 3600.0);
}

void WorkloadClass::validate() const {
    require(power_fraction >= 0.0 && power_fraction <= 1.0,
            "WorkloadClass.power_fraction must be in [0,1] (" + name + ")");
    require(!deferability.empty(), "WorkloadClass '" + name + "' needs at least one anchor");
    for (const auto& [tau, f] : deferability) {
        require(tau > 0.0, "deferability anchor duration must be > 0 (" + name + ")");
        require(f >= 0.0 && f <= 1.0, "deferability factor must be in [0,1] (" + name + ")");
    }
    require(perf_loss_per_hour >= 0.0, "perf_loss_per_hour must be >= 0 (" + name + ")");
}

void validate_mix(const WorkloadMix& mix) {
    require(!mix.empty(), "workload mix is empty");
    double sum = 0.0;
    for (const auto& cls : mix) {
        cls.validate();
        sum += cls.power_fraction;
    }
    require(std::abs(sum - 1.0) <= 1e-9,
            "workload power fractions must sum to 1 (got " + std::to_string(sum) + ")");
}

double flexibility(const WorkloadMix& mix, double t_s, double tau_s) {
    validate_mix(mix);
    double f = 0.0;
    for (const auto& cls : mix)
        f += cls.power_fraction * cls.defer_factor(tau_s) * (1.0 - cls.perf_loss(t_s, tau_s));
    return f;
}

void ThermalParams::validate() const {
    require(tau_th_s >= 30.0 && tau_th_s <= 300.0, "ThermalParams.tau_th_s must be in [30,300]");
    require(alpha0 > 0.0, "ThermalParams.alpha0 must be > 0");
    require(tau_chip_s > 0.0, "ThermalParams.tau_chip_s must be > 0");
}

double ProtectionParams::trip_rate(double v_pu, double f_hz, double f0_hz) const {
    const double dv = v_pu - v_threshold_pu;
    const double df = f_hz - f0_hz;
    return lambda0_per_s * std::exp(-dv * dv / (2.0 * sigma_v_pu * sigma_v_pu)) *
           std::exp(-df * df / (2.0 * sigma_f_hz * sigma_f_hz));
}

void ProtectionParams::validate() const {
    require(lambda0_per_s > 0.0, "ProtectionParams.lambda0 must be > 0");
    require(lambda_recon_per_s > 0.0, "ProtectionParams.lambda_recon must be > 0");
    require(v_threshold_pu > 0.0 && v_threshold_pu < 1.0,
            "ProtectionParams.v_threshold_pu must be in (0,1)");
    require(delta_f_threshold_hz > 0.0, "ProtectionParams.delta_f_threshold_hz must be > 0");
    require(sigma_v_pu > 0.0 && sigma_f_hz > 0.0, "ProtectionParams sigmas must be > 0");
    require(recon_delay_s >= 0.0, "ProtectionParams.recon_delay_s must be >= 0");
}

void PulseParams::validate() const {
    require(corr_time_s > 0.0, "PulseParams.corr_time_s must be > 0");
    require(clamp_lo >= 0.0 && clamp_hi > clamp_lo, "PulseParams clamp range invalid");
}

PulseNoiseState PulseNoiseState::init(std::size_t group_count, std::uint64_t seed) {
    PulseNoiseState state;
    state.rng.seed(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    state.w_common = gauss(state.rng);
    state.w_group.resize(group_count);
    for (auto& w : state.w_group) w = gauss(state.rng);
    return state;
}

PulseDraw draw_pulse_factors(const std::vector<RackGroup>& groups, PulseNoiseState& noise,
                             const PulseParams& params, double dt_s) {
    if (noise.w_group.size() != groups.size())
        throw ValidationError("pulse noise state does not match group count");
    const double phi = std::exp(-dt_s / params.corr_time_s);
    const double refresh = std::sqrt(std::max(0.0, 1.0 - phi * phi));
    std::normal_distribution<double> gauss(0.0, 1.0);

    noise.w_common = phi * noise.w_common + refresh * gauss(noise.rng);
    PulseDraw draw;
    draw.d.resize(groups.size());
    draw.d_raw.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double& w = noise.w_group[g];
        w = phi * w + refresh * gauss(noise.rng);
        const double rho = groups[g].rho;
        const double raw = 1.0 + rho * noise.w_common + std::sqrt(1.0 - rho * rho) * w;
        draw.d_raw[g] = raw;
        const double clamped = std::clamp(raw, params.clamp_lo, params.clamp_hi);
        if (clamped != raw) ++draw.clamp_events;
        draw.d[g] = clamped;
    }
    return draw;
}

double it_power(const std::vector<RackGroup>& groups, std::span<const double> utilization,
                std::span<const double> dvfs, std::span<const double> pulse_factors) {
    if (utilization.size() != groups.size() || dvfs.size() != groups.size() ||
        pulse_factors.size() != groups.size())
        throw ValidationError("it_power: per-group input sizes do not match group count");
    double total = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& grp = groups[g];
        const double u = utilization[g];
        const double s = dvfs[g];
        const double d = pulse_factors[g];
        if (u < 0.0 || u > 1.0)
            throw ValidationError("it_power: utilization out of [0,1] for group " +
                                  grp.accel_class.name);
        if (s < grp.accel_class.dvfs_min || s > 1.0)
            throw ValidationError("it_power: dvfs factor out of [dvfs_min,1] for group " +
                                  grp.accel_class.name);
        if (d < 0.0)
            throw ValidationError("it_power: negative pulse factor for group " +
                                  grp.accel_class.name);
        const double idle = grp.accel_class.idle_w();
        const double peak = grp.accel_class.tdp_w;
        total += static_cast<double>(grp.unit_count()) * (idle + (peak - idle) * u * s * d);
    }
    return total;
}

namespace {

double cooling_rhs(double p_cooling, double p_it, double alpha, double beta, double tau) {
    return (alpha * p_it - p_cooling + beta) / tau;
}

}  // namespace

double cooling_step(const DataCenterState& state, const ThermalParams& params, double t_amb_c,
                    double dt_s) {
    if (dt_s > params.tau_th_s / 10.0)
        throw ValidationError("cooling_step: dt exceeds tau_th/10 stiffness guard");
    const double alpha = params.alpha(state.theta_chip_c);
    const double beta = params.beta(t_amb_c);
    const double p_it = state.p_it_w * state.connected_fraction();
    const double y = state.p_cooling_w;
    const double k1 = cooling_rhs(y, p_it, alpha, beta, params.tau_th_s);
    const double k2 = cooling_rhs(y + 0.5 * dt_s * k1, p_it, alpha, beta, params.tau_th_s);
    const double k3 = cooling_rhs(y + 0.5 * dt_s * k2, p_it, alpha, beta, params.tau_th_s);
    const double k4 = cooling_rhs(y + dt_s * k3, p_it, alpha, beta, params.tau_th_s);
    return std::max(0.0, y + dt_s / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

double chip_temp_step(const DataCenterState& state, const ThermalParams& params, double t_amb_c,
                      double dt_s) {
    const double p_it = state.p_it_w * state.connected_fraction();
    const double theta_ss =
        t_amb_c + params.k_heat_c_per_w * p_it - params.k_cool_c_per_w * state.p_cooling_w;
    const double decay = std::exp(-dt_s / params.tau_chip_s);
    return theta_ss + (state.theta_chip_c - theta_ss) * decay;
}

void protection_step(DataCenterState& state, const ProtectionParams& params, double v_pu,
                     double f_hz, double f0_hz, double t_s, double dt_s) {
    const bool trip_condition =
        v_pu < params.v_threshold_pu || std::abs(f_hz - f0_hz) > params.delta_f_threshold_hz;
    if (trip_condition) {
        const double lambda = params.trip_rate(v_pu, f_hz, f0_hz);
        // dN/dt = lambda (N_on - N) integrated exactly with lambda held over the step
        const double gap = state.n_on - state.n_trip;
        state.n_trip = state.n_on - gap * std::exp(-lambda * dt_s);
        state.t_last_trip_s = t_s;
    } else if (t_s > state.t_last_trip_s + params.recon_delay_s) {
        state.n_trip *= std::exp(-params.lambda_recon_per_s * dt_s);
    }
    state.n_trip = std::clamp(state.n_trip, 0.0, state.n_on);
}

}  // namespace gridpulse::load
