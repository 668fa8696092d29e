#pragma once

#include "beatgen/model.hpp"

namespace beatgen {

/// One step of the 1D period-correction map:
/// f(I) = I + delta_t * (T(I) - t_stim).
/// The unique fixed point is drive_of_period(t_stim). The iterate can leave
/// the domain (result <= 1); callers detect that with in_drive_domain().
double step_period_map(double drive, const ModelParams& p);

/// Slope of the 1D period map: f'(I) = 1 - delta_t * tau / (I (I - 1)).
double derivative_period_map(double drive, const ModelParams& p);

/// Drive where the 1D period map attains its local minimum:
/// (1 + sqrt(1 + 4 tau delta_t)) / 2.
double period_map_minimum_drive(const ModelParams& p);

/// Drive increment of the phase rule: sgn(phi - 0.5) * phi * (1 - phi),
/// with the three-valued sign convention sgn(0) = 0.
/// Throws domain_error outside [0, 1].
double phase_increment(double phase);

/// Membrane voltage when a tone arrives phase * t_stim after the cycle-start
/// spike: v = I * (1 - exp(-t_stim * phase / tau)).
/// Throws timing_error when the generator would already have fired
/// (T(I) < t_stim * phase, i.e. v > 1).
double voltage_at_tone(const MapState& s, const ModelParams& p);

/// Realized cycle period when a tone falls inside the cycle:
/// T_n = phase * t_stim + tau * ln((I~ - v)/(I~ - 1)), with I~ the drive
/// after the phase rule. Throws stalled_error when I~ <= 1 while v < 1.
double cycle_period(const MapState& s, const ModelParams& p);

/// Tone-within-cycle indicator: Theta(T(I) - t_stim * phase) with
/// Theta(0) = 1. Returns 1 when a tone occurs before (or exactly at) the
/// expected next spike.
int h_s(const MapState& s, const ModelParams& p);

/// Result of one order-preserving (strictly alternating events) map step.
struct OrderPreservingStep {
    MapState next;
    CycleRecord cycle;
    /// False when the new phase left [0, 1]: the strict alternation broke
    /// down and the caller must switch to the event-based step.
    bool order_preserved = true;
};

/// One step of the 2D order-preserving map (phase rule at the tone, period
/// rule at the spike, no phase wrapping). Requires drive > 1, phase in [0, 1].
OrderPreservingStep step_order_preserving(const MapState& s, const ModelParams& p);

/// Result of one order-indeterminant event-based map step.
struct OiebStep {
    MapState next;
    CycleRecord cycle;
    StepStatus status = StepStatus::ok;
};

/// One step of the order-indeterminant event-based map. Decides via h_s
/// whether the cycle contains a tone; applies at most one phase update;
/// wraps the phase into [0, 1). Requires drive > 1, phase in [0, 1).
///
/// status == stalled:   the phase rule pulled the drive to <= 1 mid-cycle
///                      (next holds the pre-step state).
/// status == divergent: the cycle completed but the post-update drive
///                      is <= 1 (next holds the out-of-domain state).
OiebStep step_oieb(const MapState& s, const ModelParams& p);

namespace detail {

/// Shared h_s = 1 cycle evolution: quantities at and after the in-cycle tone.
/// Exact expression order here is what both the map steps and the event
/// simulator evaluate, so the two stay bit-identical per cycle.
struct ToneCycle {
    double voltage = 0.0;            // membrane when the tone arrives
    double drive_after_phase = 0.0;  // drive after the phase rule
    double remaining = 0.0;          // tone-to-spike time
    double period = 0.0;             // full realized cycle period
    bool stalled = false;
};

ToneCycle tone_cycle(double drive, double phase, const ModelParams& p);

}  // namespace detail

}  // namespace beatgen
