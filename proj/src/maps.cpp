#include "beatgen/maps.hpp"

#include <cmath>

#include "beatgen/lif.hpp"

namespace beatgen {

namespace {

void require_drive(double drive, const char* who) {
    if (!in_drive_domain(drive)) throw domain_error(std::string(who) + ": drive must be > 1");
}

void require_phase_closed(double phase, const char* who) {
    if (!(phase >= 0.0 && phase <= 1.0)) throw domain_error(std::string(who) + ": phase must be in [0, 1]");
}

}  // namespace

double step_period_map(double drive, const ModelParams& p) {
    require_drive(drive, "step_period_map");
    return drive + p.delta_t * (period_of_drive(drive, p) - p.t_stim);
}

double derivative_period_map(double drive, const ModelParams& p) {
    require_drive(drive, "derivative_period_map");
    return 1.0 - p.delta_t * p.tau / (drive * (drive - 1.0));
}

double period_map_minimum_drive(const ModelParams& p) {
    return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * p.tau * p.delta_t));
}

double phase_increment(double phase) {
    if (!(phase >= 0.0 && phase <= 1.0)) throw domain_error("phase_increment: phase must be in [0, 1]");
    double s = phase > 0.5 ? 1.0 : (phase < 0.5 ? -1.0 : 0.0);
    return s * (phase * (1.0 - phase));
}

double voltage_at_tone(const MapState& s, const ModelParams& p) {
    require_drive(s.drive, "voltage_at_tone");
    require_phase_closed(s.phase, "voltage_at_tone");
    if (period_of_drive(s.drive, p) < p.t_stim * s.phase)
        throw timing_error("voltage_at_tone: generator fires before the tone arrives");
    return membrane_voltage(s.drive, p.t_stim * s.phase, p.tau);
}

namespace detail {

ToneCycle tone_cycle(double drive, double phase, const ModelParams& p) {
    ToneCycle c;
    c.voltage = membrane_voltage(drive, p.t_stim * phase, p.tau);
    c.drive_after_phase = drive + p.delta_phi * phase_increment(phase);
    if (!(c.drive_after_phase > 1.0) || c.voltage >= c.drive_after_phase) {
        c.stalled = true;
        return c;
    }
    // Tone-to-spike time. Under the event-based step the voltage never
    // exceeds 1 here (it is 0 exactly at a spike/tone coincidence); the
    // order-preserving map also evaluates the smooth extension with v > 1,
    // where the term goes negative.
    c.remaining = p.tau * std::log1p((1.0 - c.voltage) / (c.drive_after_phase - 1.0));
    c.period = phase * p.t_stim + c.remaining;
    return c;
}

}  // namespace detail

double cycle_period(const MapState& s, const ModelParams& p) {
    require_drive(s.drive, "cycle_period");
    require_phase_closed(s.phase, "cycle_period");
    auto c = detail::tone_cycle(s.drive, s.phase, p);
    if (c.stalled) throw stalled_error("cycle_period: effective drive <= 1, no second spike");
    return c.period;
}

int h_s(const MapState& s, const ModelParams& p) {
    require_drive(s.drive, "h_s");
    return period_of_drive(s.drive, p) >= p.t_stim * s.phase ? 1 : 0;
}

OrderPreservingStep step_order_preserving(const MapState& s, const ModelParams& p) {
    require_drive(s.drive, "step_order_preserving");
    require_phase_closed(s.phase, "step_order_preserving");
    auto c = detail::tone_cycle(s.drive, s.phase, p);
    if (c.stalled) throw stalled_error("step_order_preserving: effective drive <= 1");

    OrderPreservingStep out;
    out.next.drive = c.drive_after_phase + p.delta_t * (c.period - p.t_stim);
    out.next.phase = s.phase + (p.t_stim - c.period) / p.t_stim;
    out.cycle = CycleRecord{1, c.drive_after_phase, c.period, false};
    out.order_preserved = out.next.phase >= 0.0 && out.next.phase <= 1.0;
    return out;
}

OiebStep step_oieb(const MapState& s, const ModelParams& p) {
    require_drive(s.drive, "step_oieb");
    if (!(s.phase >= 0.0 && s.phase < 1.0)) throw domain_error("step_oieb: phase must be in [0, 1)");

    OiebStep out;
    double drive_after_phase;
    double period;
    bool tone_in_cycle = period_of_drive(s.drive, p) >= p.t_stim * s.phase;
    if (tone_in_cycle) {
        auto c = detail::tone_cycle(s.drive, s.phase, p);
        if (c.stalled) {
            out.next = s;
            out.cycle = CycleRecord{1, c.drive_after_phase, 0.0, false};
            out.status = StepStatus::stalled;
            return out;
        }
        drive_after_phase = c.drive_after_phase;
        period = c.period;
    } else {
        // No tone before the next spike: the period rule sees the free-running
        // interval and no phase update happens.
        drive_after_phase = s.drive;
        period = period_of_drive(s.drive, p);
    }

    out.next.drive = drive_after_phase + p.delta_t * (period - p.t_stim);
    double pre = s.phase + (p.t_stim - period) / p.t_stim;
    out.next.phase = wrap_unit(pre);

    int tones = 0;
    if (tone_in_cycle) {
        // Each unit the wrap adds corresponds to one further tone inside the
        // cycle; a tone landing exactly on the closing spike belongs to the
        // next cycle (pre == 1 wraps down without adding a tone).
        double fl = std::floor(pre);
        tones = 1 + (fl < 0.0 ? static_cast<int>(-fl) : 0);
    }
    out.cycle = CycleRecord{tones, drive_after_phase, period, tones != 1};
    out.status = in_drive_domain(out.next.drive) ? StepStatus::ok : StepStatus::divergent;
    return out;
}

}  // namespace beatgen
