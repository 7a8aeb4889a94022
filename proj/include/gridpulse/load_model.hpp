#pragma once

// Hierarchical data-center power model: IT fleet power with correlated
// stochastic pulsing, first-order thermal-power coupling, workload
// flexibility, and voltage/frequency-sensitive protection dynamics.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gridpulse/errors.hpp"

namespace gridpulse::load {

/// Accelerator family (H100, B200, ...). Idle power is a fixed fraction of TDP.
struct AcceleratorClass {
    std::string name;
    double tdp_w = 0.0;
    double idle_fraction = 0.2;
    double dvfs_min = 0.65;  // lower bound of the DVFS throttle factor

    double idle_w() const { return idle_fraction * tdp_w; }
    void validate() const;
};

/// Aggregated rack group: node_count nodes x accels_per_node accelerators,
/// all sharing one accelerator class and one intra-rack correlation rho.
struct RackGroup {
    AcceleratorClass accel_class;
    std::int64_t node_count = 1;
    std::int64_t accels_per_node = 1;
    double rho = 0.8;  // intra-rack pulse correlation, [0,1]

    std::int64_t unit_count() const { return node_count * accels_per_node; }
    double rated_w() const { return static_cast<double>(unit_count()) * accel_class.tdp_w; }
    void validate() const;
};

/// One workload class of the facility mix. Deferability is anchored at
/// discrete durations (seconds -> factor); evaluation interpolates
/// linearly in log-time and extrapolates as constant beyond the anchors.
struct WorkloadClass {
    std::string name;
    double power_fraction = 0.0;
    std::map<double, double> deferability;  // duration_s -> f in [0,1]
    double perf_loss_per_hour = 0.0;        // L accrues linearly with deferral time, capped at 1
    bool requires_checkpoint = false;       // deferral start must align with a checkpoint

    double defer_factor(double tau_s) const;
    double perf_loss(double t_s, double tau_s) const;
    void validate() const;
};

using WorkloadMix = std::vector<WorkloadClass>;

void validate_mix(const WorkloadMix& mix);

/// Available power flexibility F(t, tau) of the mix, in [0, 1].
double flexibility(const WorkloadMix& mix, double t_s, double tau_s);

/// Cooling-loop coupling parameters. alpha(theta) = alpha0 * (1 + k_alpha*(theta - theta_ref)),
/// beta(T_amb) = beta0 + beta_slope * (T_amb - t_amb_ref).
struct ThermalParams {
    double tau_th_s = 120.0;
    double alpha0 = 0.1;
    double k_alpha_per_c = 0.0;
    double theta_ref_c = 65.0;
    double beta0_w = 0.0;
    double beta_slope_w_per_c = 0.0;
    double t_amb_ref_c = 25.0;

    // Chip temperature closure (the cooling ODE needs theta_chip but no chip
    // dynamic is otherwise defined): first-order law toward
    // t_amb + k_heat*P_IT - k_cool*P_cooling.
    double tau_chip_s = 60.0;
    double k_heat_c_per_w = 0.0;
    double k_cool_c_per_w = 0.0;

    double alpha(double theta_chip_c) const {
        return alpha0 * (1.0 + k_alpha_per_c * (theta_chip_c - theta_ref_c));
    }
    double beta(double t_amb_c) const {
        return beta0_w + beta_slope_w_per_c * (t_amb_c - t_amb_ref_c);
    }
    void validate() const;
};

/// Trip/reconnect rate parameters of the facility protection layer.
struct ProtectionParams {
    double lambda0_per_s = 0.5;
    double lambda_recon_per_s = 0.2;
    double v_threshold_pu = 0.88;
    double delta_f_threshold_hz = 1.0;
    double sigma_v_pu = 0.05;
    double sigma_f_hz = 0.5;
    double recon_delay_s = 0.5;

    double trip_rate(double v_pu, double f_hz, double f0_hz) const;
    void validate() const;
};

/// AR(1) noise driving the pulse factors. Unit stationary variance; the
/// correlation time sets how fast W_c / W_ij decorrelate.
struct PulseParams {
    double corr_time_s = 0.1;
    double clamp_lo = 0.0;
    double clamp_hi = 2.0;

    void validate() const;
};

struct PulseNoiseState {
    double w_common = 0.0;
    std::vector<double> w_group;
    std::mt19937_64 rng;

    /// Seeds the generator and draws the initial W values from the
    /// stationary distribution so early statistics are unbiased.
    static PulseNoiseState init(std::size_t group_count, std::uint64_t seed);
};

struct PulseDraw {
    std::vector<double> d;      // clamped factors, used for power
    std::vector<double> d_raw;  // pre-clamp factors, used for statistics
    int clamp_events = 0;
};

/// Advances the shared and per-group noise one step and returns the
/// per-group pulse factors d = 1 + rho*W_c + sqrt(1-rho^2)*W_ij.
PulseDraw draw_pulse_factors(const std::vector<RackGroup>& groups, PulseNoiseState& noise,
                             const PulseParams& params, double dt_s);

/// Continuous facility state plus protection counters. RNG state lives here
/// so a run replays bit-identically from (scenario, seed).
struct DataCenterState {
    double p_it_w = 0.0;
    double p_cooling_w = 0.0;
    double p_aux_w = 0.0;
    double theta_chip_c = 65.0;
    double n_on = 0.0;
    double n_trip = 0.0;  // fluid approximation, 0 <= n_trip <= n_on
    double t_last_trip_s = -1e300;
    PulseNoiseState noise;

    double connected_fraction() const {
        return n_on > 0.0 ? (n_on - n_trip) / n_on : 1.0;
    }
};

/// Fleet IT power for per-group utilization/DVFS/pulse factors.
/// Rejects u outside [0,1], s outside [dvfs_min, 1] and negative d.
double it_power(const std::vector<RackGroup>& groups, std::span<const double> utilization,
                std::span<const double> dvfs, std::span<const double> pulse_factors);

/// Advances the cooling power ODE
///   tau_th * dP_cooling/dt = alpha(theta_chip)*P_IT - P_cooling + beta(T_amb)
/// one RK4 step. Rejects dt above the tau_th/10 stiffness guard.
double cooling_step(const DataCenterState& state, const ThermalParams& params, double t_amb_c,
                    double dt_s);

/// Advances the chip temperature closure one (exact exponential) step.
double chip_temp_step(const DataCenterState& state, const ThermalParams& params, double t_amb_c,
                      double dt_s);

/// Advances the tripped-unit count one step. Branch selection:
/// trip while V < V_threshold or |f - f0| > delta_f_threshold (updates
/// t_last_trip), reconnect once the delay has elapsed, hold otherwise.
/// The active branch is integrated exactly over the step.
void protection_step(DataCenterState& state, const ProtectionParams& params, double v_pu,
                     double f_hz, double f0_hz, double t_s, double dt_s);

/// Facility draw P_DC = connected*P_IT + P_cooling + P_aux + P_loss(connected*P_IT).
/// Protection trips unload the IT share only; cooling/aux decay through their
/// own dynamics.
template <typename LossFn>
double total_dc_power(const DataCenterState& state, LossFn&& p_loss_fn) {
    const double p_it_connected = state.p_it_w * state.connected_fraction();
    return p_it_connected + state.p_cooling_w + state.p_aux_w + p_loss_fn(p_it_connected);
}

/// Quadratic distribution-loss model, calibrated so losses are
/// `loss_fraction_at_rated` of rated IT power when P_IT is at rating.
struct QuadraticLoss {
    double kappa_per_w = 0.0;

    static QuadraticLoss from_rated(double rated_it_w, double loss_fraction_at_rated) {
        QuadraticLoss loss;
        if (rated_it_w > 0.0) loss.kappa_per_w = loss_fraction_at_rated / rated_it_w;
        return loss;
    }
    double operator()(double p_it_w) const { return kappa_per_w * p_it_w * p_it_w; }
};

}  // namespace gridpulse::load
