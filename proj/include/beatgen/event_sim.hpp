#pragma once

#include <cstdint>
#include <vector>

#include "beatgen/model.hpp"

namespace beatgen {

enum class EventKind : std::uint8_t { bg_spike, tone };

const char* to_string(EventKind k);

struct Event {
    double time = 0.0;  ///< absolute time (ms)
    EventKind kind = EventKind::bg_spike;
    double drive_before = 0.0;
    double drive_after = 0.0;
    double voltage = 0.0;  ///< membrane value at the event (1 at every spike)
};

enum class SimTermination : std::uint8_t { completed, stalled, divergent };

const char* to_string(SimTermination t);

/// Continuous-time event-driven run of the beat generator against the
/// isochronous tone sequence. All event times are closed-form; tone times
/// are tone_origin + k * t_stim by multiplication (no accumulation).
struct EventTrace {
    ModelParams params;
    double tone_origin = 0.0;  ///< time of tone 0
    std::vector<Event> events;
    std::vector<CycleRecord> cycles;
    SimTermination termination = SimTermination::completed;
};

/// Time until the membrane charges from v0 to threshold under the given
/// drive. Returns 0 when v0 >= 1; throws stalled_error when the generator
/// never fires (drive <= 1 with v0 < 1).
double next_spike_time(double v0, double drive, const ModelParams& p);

/// Simulate n_cycles beat-generator cycles from x0. The initial spike is at
/// time 0 and the first tone at x0.phase * t_stim. Phase correction fires at
/// the first tone of each cycle, period correction at every spike. The run
/// stops early when the generator stalls (phase rule pulled the drive to
/// <= 1) or diverges (post-update drive outside the oscillatory range).
EventTrace simulate(MapState x0, const ModelParams& p, std::size_t n_cycles);

/// Extract the map iterates from a trace: (drive after period correction,
/// time to the next unconsumed tone over t_stim) at each spike. The first
/// entry reproduces the simulation's initial condition.
std::vector<MapState> trace_to_map_states(const EventTrace& trace);

/// Result of the two-tempo protocol: run at p.t_stim until t_switch, then
/// switch the tone interval to new_t_stim (the first tone at or after
/// t_switch starts the new grid).
struct TempoChangeResult {
    EventTrace trace;
    std::size_t cycles_to_converge = 0;  ///< spikes after the switch until |I - I*(new)| < tol
    bool converged = false;
    double switch_time = 0.0;  ///< time of the tone where the new interval took effect
};

TempoChangeResult simulate_tempo_change(MapState x0, const ModelParams& p, double t_switch,
                                        double new_t_stim, std::size_t max_cycles,
                                        double convergence_tol = 1e-6);

}  // namespace beatgen
