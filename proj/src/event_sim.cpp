#include "beatgen/event_sim.hpp"

#include <cmath>
#include <limits>

#include "beatgen/lif.hpp"
#include "beatgen/maps.hpp"
#include "beatgen/orbit.hpp"

namespace beatgen {

const char* to_string(EventKind k) {
    return k == EventKind::bg_spike ? "bg_spike" : "tone";
}

const char* to_string(SimTermination t) {
    switch (t) {
        case SimTermination::completed: return "completed";
        case SimTermination::stalled: return "stalled";
        case SimTermination::divergent: return "divergent";
    }
    return "?";
}

double next_spike_time(double v0, double drive, const ModelParams& p) {
    return time_to_threshold(v0, drive, p.tau);
}

EventTrace simulate(MapState x0, const ModelParams& p, std::size_t n_cycles) {
    validate(p);
    if (!in_drive_domain(x0.drive)) throw domain_error("simulate: drive must be > 1");
    if (!(x0.phase >= 0.0 && x0.phase < 1.0)) throw domain_error("simulate: phase must be in [0, 1)");

    EventTrace trace;
    trace.params = p;
    trace.tone_origin = x0.phase * p.t_stim;

    double drive = x0.drive;
    double phase = x0.phase;       // time to the next unconsumed tone, in t_stim units
    double spike_time = 0.0;       // absolute time of the cycle-start spike
    long long tone_index = 0;      // index of the next unconsumed tone
    bool first_tone_emitted = false;  // set when a coincident tone was emitted before the spike

    auto tone_time = [&](long long k) { return trace.tone_origin + static_cast<double>(k) * p.t_stim; };

    // Initial spike: the simulation starts at the instant of a beat-generator
    // spike with the membrane at threshold.
    trace.events.push_back(Event{0.0, EventKind::bg_spike, drive, drive, 1.0});

    for (std::size_t n = 0; n < n_cycles; ++n) {
        // Event order inside the cycle is decided by the same comparison the
        // event-based map uses: the tone falls inside the cycle iff the
        // free-running period reaches the tone time.
        bool tone_in_cycle = period_of_drive(drive, p) >= p.t_stim * phase;

        double drive_after_phase;
        double period;
        double first_tone_voltage = 0.0;
        if (tone_in_cycle) {
            auto c = detail::tone_cycle(drive, phase, p);
            if (!first_tone_emitted) {
                trace.events.push_back(Event{tone_time(tone_index), EventKind::tone, drive,
                                             c.drive_after_phase, c.voltage});
            }
            if (c.stalled) {
                trace.termination = SimTermination::stalled;
                return trace;
            }
            drive_after_phase = c.drive_after_phase;
            period = c.period;
            first_tone_voltage = c.voltage;
        } else {
            drive_after_phase = drive;
            period = period_of_drive(drive, p);
        }
        first_tone_emitted = false;

        double next_drive = drive_after_phase + p.delta_t * (period - p.t_stim);
        double pre = phase + (p.t_stim - period) / p.t_stim;
        double next_phase = wrap_unit(pre);
        int tones = 0;
        if (tone_in_cycle) {
            double fl = std::floor(pre);
            tones = 1 + (fl < 0.0 ? static_cast<int>(-fl) : 0);
        }

        // Later tones in the same cycle (no corrections): membrane evolves
        // from the first tone's value under the corrected drive.
        for (int j = 1; j < tones; ++j) {
            double elapsed = static_cast<double>(j) * p.t_stim;  // since the first tone
            double v = drive_after_phase -
                       (drive_after_phase - first_tone_voltage) * std::exp(-elapsed / p.tau);
            trace.events.push_back(
                Event{tone_time(tone_index + j), EventKind::tone, drive_after_phase, drive_after_phase, v});
        }

        double next_spike = spike_time + period;
        long long next_tone_index = tone_index + tones;

        // A vanishing next phase means the following cycle's first tone lands
        // exactly on this spike; coincident events are ordered (tone, spike).
        bool more_cycles = n + 1 < n_cycles;
        bool will_diverge = detail::engine_divergent(next_drive);
        if (next_phase == 0.0 && more_cycles && !will_diverge) {
            trace.events.push_back(Event{tone_time(next_tone_index), EventKind::tone, drive_after_phase,
                                         drive_after_phase, 1.0});
            first_tone_emitted = true;
        }
        trace.events.push_back(Event{next_spike, EventKind::bg_spike, drive_after_phase, next_drive, 1.0});
        trace.cycles.push_back(CycleRecord{tones, drive_after_phase, period, tones != 1});

        if (will_diverge) {
            trace.termination = SimTermination::divergent;
            return trace;
        }

        drive = next_drive;
        phase = next_phase;
        spike_time = next_spike;
        tone_index = next_tone_index;
    }
    return trace;
}

std::vector<MapState> trace_to_map_states(const EventTrace& trace) {
    std::vector<MapState> states;
    const double t_stim = trace.params.t_stim;
    long long tones_seen = 0;
    for (const auto& e : trace.events) {
        if (e.kind == EventKind::tone) {
            ++tones_seen;
            continue;
        }
        double next_tone = trace.tone_origin + static_cast<double>(tones_seen) * t_stim;
        states.push_back(MapState{e.drive_after, wrap_unit((next_tone - e.time) / t_stim)});
    }
    return states;
}

TempoChangeResult simulate_tempo_change(MapState x0, const ModelParams& p, double t_switch,
                                        double new_t_stim, std::size_t max_cycles,
                                        double convergence_tol) {
    validate(p);
    if (!(new_t_stim > 0.0)) throw domain_error("simulate_tempo_change: new_t_stim must be > 0");
    if (!in_drive_domain(x0.drive)) throw domain_error("simulate_tempo_change: drive must be > 1");
    if (!(x0.phase >= 0.0 && x0.phase < 1.0))
        throw domain_error("simulate_tempo_change: phase must be in [0, 1)");

    TempoChangeResult out;
    out.trace.params = p;
    out.trace.tone_origin = x0.phase * p.t_stim;

    ModelParams cur = p;
    double drive = x0.drive;
    double v = 0.0;
    double t_now = 0.0;
    double last_spike = 0.0;
    bool switched = false;
    bool phase_corrected = false;
    // Tone grids: t0 + k * t_stim before the switch, anchor + j * new_t_stim after.
    long long grid_index = 0;
    double grid_anchor = out.trace.tone_origin;
    double grid_step = p.t_stim;

    double target = drive_of_period(new_t_stim, ModelParams{p.tau, new_t_stim, p.delta_t, p.delta_phi});

    out.trace.events.push_back(Event{0.0, EventKind::bg_spike, drive, drive, 1.0});

    for (std::size_t guard = 0, spikes = 0; spikes < max_cycles; ++guard) {
        if (guard > 100 * max_cycles + 1000) break;  // tone-only progress guard
        double next_tone = grid_anchor + static_cast<double>(grid_index) * grid_step;
        double next_spike = std::numeric_limits<double>::infinity();
        if (v >= 1.0) {
            next_spike = t_now;
        } else if (drive > 1.0) {
            next_spike = t_now + time_to_threshold(v, drive, cur.tau);
        } else if (next_tone > t_now && cur.delta_phi == 0.0) {
            out.trace.termination = SimTermination::stalled;  // nothing can restart the generator
            break;
        }

        if (next_tone <= next_spike) {
            // Advance the membrane to the tone.
            v = drive - (drive - v) * std::exp(-(next_tone - t_now) / cur.tau);
            t_now = next_tone;
            if (!switched && next_tone >= t_switch) {
                switched = true;
                cur.t_stim = new_t_stim;
                out.switch_time = next_tone;
                grid_anchor = next_tone;
                grid_step = new_t_stim;
                grid_index = 0;
            }
            double before = drive;
            if (!phase_corrected) {
                double phi = (next_tone - last_spike) / cur.t_stim;
                if (phi > 1.0) phi = 1.0;
                drive = drive + cur.delta_phi * phase_increment(phi);
                phase_corrected = true;
            }
            out.trace.events.push_back(Event{t_now, EventKind::tone, before, drive, v});
            ++grid_index;
            if (!(drive > 1.0) && v < 1.0 && cur.delta_phi == 0.0) {
                out.trace.termination = SimTermination::stalled;
                break;
            }
        } else {
            t_now = next_spike;
            double measured = t_now - last_spike;
            double before = drive;
            drive = drive + cur.delta_t * (measured - cur.t_stim);
            out.trace.events.push_back(Event{t_now, EventKind::bg_spike, before, drive, 1.0});
            out.trace.cycles.push_back(CycleRecord{0, before, measured, false});
            v = 0.0;
            last_spike = t_now;
            phase_corrected = false;
            ++spikes;
            if (detail::engine_divergent(drive)) {
                out.trace.termination = SimTermination::divergent;
                break;
            }
            if (switched) {
                ++out.cycles_to_converge;
                if (std::fabs(drive - target) < convergence_tol) {
                    out.converged = true;
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace beatgen
