#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace beatgen {

/// Parameters of the driven beat generator and its two learning rules.
///
/// All times are in milliseconds; the drive and phase are dimensionless.
struct ModelParams {
    double tau = 1000.0;     ///< membrane time constant (ms, > 0)
    double t_stim = 500.0;   ///< stimulus interonset interval (ms, > 0)
    double delta_t = 0.0;    ///< period-correction strength (drive units per ms, >= 0)
    double delta_phi = 0.0;  ///< phase-correction strength (drive units, >= 0)
};

/// State of the two-dimensional maps: drive I and phase phi.
/// The 1D period map uses only the drive.
struct MapState {
    double drive = 0.0;  ///< external drive; the maps operate on drive > 1
    double phase = 0.0;  ///< time to the next tone over t_stim, in [0, 1)
};

/// Per-cycle bookkeeping emitted by the event-based map and the simulator.
struct CycleRecord {
    int tones_in_cycle = 0;          ///< number of stimulus tones consumed in the cycle
    double drive_after_phase = 0.0;  ///< drive after the phase rule, before the period rule
    double period = 0.0;             ///< realized spike-to-spike interval (ms)
    bool order_switch = false;       ///< true when tones_in_cycle != 1
};

/// Thrown when an argument is outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when the beat generator can never reach threshold again
/// (effective drive at or below 1 while the membrane sits below threshold).
struct stalled_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by voltage_at_tone when the tone would arrive after the next spike.
struct timing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void validate(const ModelParams& p) {
    if (!(p.tau > 0.0)) throw domain_error("tau must be > 0");
    if (!(p.t_stim > 0.0)) throw domain_error("t_stim must be > 0");
    if (!(p.delta_t >= 0.0)) throw domain_error("delta_t must be >= 0");
    if (!(p.delta_phi >= 0.0)) throw domain_error("delta_phi must be >= 0");
}

/// The maps are defined on drive > 1 (no oscillation at or below 1).
constexpr bool in_drive_domain(double drive) { return drive > 1.0; }

/// Outcome status of a single map step.
enum class StepStatus {
    ok,        ///< step completed, next state inside the domain
    stalled,   ///< mid-cycle drive fell to <= 1: no further spike exists
    divergent  ///< step completed but the post-update drive left (1, inf)
};

/// Distance between phases on the unit circle (phi = 0 and phi = 1 coincide).
inline double circular_phase_distance(double a, double b) {
    double d = std::fabs(a - b);
    return d > 0.5 ? 1.0 - d : d;
}

/// Reduce a value to [0, 1).
inline double wrap_unit(double x) {
    double y = x - std::floor(x);
    return y >= 1.0 ? 0.0 : y;
}

namespace limits {
// Engine-level divergence thresholds for long-run iteration.
inline constexpr double drive_floor = 1.0 + 1e-12;
inline constexpr double drive_ceiling = 1e6;
// Attractor detection.
inline constexpr double fixed_point_tol = 1e-9;
inline constexpr double recurrence_rel_tol = 1e-8;
inline constexpr double lyapunov_chaos_threshold = 0.01;
inline constexpr int max_detected_period = 512;
// Linearization.
inline constexpr double non_hyperbolic_band = 1e-10;
inline constexpr double boundary_residual_tol = 1e-8;
inline constexpr double bisection_param_tol = 1e-10;
}  // namespace limits

}  // namespace beatgen
