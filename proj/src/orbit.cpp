#include "beatgen/orbit.hpp"

#include <cmath>
#include <functional>

#include "beatgen/lif.hpp"
#include "beatgen/maps.hpp"
#include "beatgen/parallel.hpp"

namespace beatgen {

const char* to_string(MapKind k) {
    switch (k) {
        case MapKind::period_1d: return "period1d";
        case MapKind::order_preserving: return "order-preserving";
        case MapKind::oieb: return "oieb";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::stalled: return "stalled";
        case Termination::divergent: return "divergent";
        case Termination::order_violation: return "order-violation";
    }
    return "?";
}

const char* to_string(AttractorKind k) {
    switch (k) {
        case AttractorKind::fixed_point: return "fixed-point";
        case AttractorKind::periodic: return "periodic";
        case AttractorKind::chaotic: return "chaotic";
        case AttractorKind::divergent: return "divergent";
        case AttractorKind::undecided: return "undecided";
    }
    return "?";
}

namespace detail {

StepInfo advance(MapKind kind, const MapState& s, const ModelParams& p) {
    StepInfo info;
    switch (kind) {
        case MapKind::period_1d: {
            double t = period_of_drive(s.drive, p);
            info.next = MapState{s.drive + p.delta_t * (t - p.t_stim), 0.0};
            info.cycle = CycleRecord{1, s.drive, t, false};
            info.status = in_drive_domain(info.next.drive) ? StepStatus::ok : StepStatus::divergent;
            return info;
        }
        case MapKind::order_preserving: {
            auto r = step_order_preserving(s, p);
            info.next = r.next;
            info.cycle = r.cycle;
            info.order_preserved = r.order_preserved;
            info.status = in_drive_domain(info.next.drive) ? StepStatus::ok : StepStatus::divergent;
            return info;
        }
        case MapKind::oieb: {
            auto r = step_oieb(s, p);
            info.next = r.next;
            info.cycle = r.cycle;
            info.status = r.status;
            info.tone_in_cycle = r.cycle.tones_in_cycle > 0;
            info.wraps = r.cycle.tones_in_cycle > 1 ? r.cycle.tones_in_cycle - 1 : 0;
            return info;
        }
    }
    throw domain_error("advance: unknown map kind");
}

}  // namespace detail

Trajectory iterate(MapKind kind, MapState x0, const ModelParams& p, std::size_t steps) {
    validate(p);
    Trajectory out;
    out.states.reserve(steps + 1);
    out.states.push_back(x0);
    out.cycles.reserve(steps);
    MapState x = x0;
    for (std::size_t n = 0; n < steps; ++n) {
        detail::StepInfo info;
        try {
            info = detail::advance(kind, x, p);
        } catch (const stalled_error&) {
            out.termination = Termination::stalled;
            return out;
        }
        if (info.status == StepStatus::stalled) {
            out.termination = Termination::stalled;
            return out;
        }
        out.states.push_back(info.next);
        out.cycles.push_back(info.cycle);
        if (info.status == StepStatus::divergent || detail::engine_divergent(info.next.drive)) {
            out.termination = Termination::divergent;
            return out;
        }
        if (!info.order_preserved) {
            out.termination = Termination::order_violation;
            return out;
        }
        x = info.next;
    }
    return out;
}

namespace {

double state_distance(MapKind kind, const MapState& a, const MapState& b) {
    double di = std::fabs(a.drive - b.drive) / std::max(1.0, std::fabs(a.drive));
    if (kind == MapKind::period_1d) return di;
    return std::max(di, circular_phase_distance(a.phase, b.phase));
}

bool near_synchronous_point(MapKind kind, const MapState& x, double istar) {
    if (std::fabs(x.drive - istar) > limits::fixed_point_tol * std::max(1.0, istar)) return false;
    if (kind == MapKind::period_1d) return true;
    return circular_phase_distance(x.phase, 0.0) <= limits::fixed_point_tol;
}

}  // namespace

LyapunovEstimate lyapunov_exponent(MapKind kind, MapState x0, const ModelParams& p, std::size_t steps) {
    validate(p);
    constexpr double d0 = 1e-9;
    MapState a = x0;
    MapState b = x0;
    b.drive += d0;

    double acc = 0.0;
    LyapunovEstimate est;
    for (std::size_t n = 0; n < steps; ++n) {
        bool upper_a = a.phase > 0.5;
        bool upper_b = b.phase > 0.5;
        detail::StepInfo ia, ib;
        try {
            ia = detail::advance(kind, a, p);
            ib = detail::advance(kind, b, p);
        } catch (const std::exception&) {
            throw lyapunov_error("lyapunov_exponent: trajectory left the domain");
        }
        if (ia.status != StepStatus::ok || ib.status != StepStatus::ok ||
            detail::engine_divergent(ia.next.drive) || detail::engine_divergent(ib.next.drive))
            throw lyapunov_error("lyapunov_exponent: trajectory left the domain");

        double di = ib.next.drive - ia.next.drive;
        double dphi = 0.0;
        if (kind != MapKind::period_1d) {
            dphi = ib.next.phase - ia.next.phase;
            if (dphi > 0.5) dphi -= 1.0;
            if (dphi < -0.5) dphi += 1.0;
        }
        double d = std::sqrt(di * di + dphi * dphi);
        if (d <= 0.0) d = 1e-300;

        bool smooth = kind == MapKind::period_1d ||
                      (upper_a == upper_b && ia.tone_in_cycle == ib.tone_in_cycle && ia.wraps == ib.wraps);
        if (smooth) {
            acc += std::log(d / d0);
            ++est.used;
        } else {
            ++est.excluded;
        }

        double scale = d0 / d;
        a = ia.next;
        b.drive = a.drive + di * scale;
        b.phase = kind == MapKind::period_1d ? 0.0 : wrap_unit(a.phase + dphi * scale);
        if (!(b.drive > 1.0)) b.drive = a.drive + d0;  // keep the shadow inside the domain
    }
    if (est.used == 0 || est.excluded > est.used)
        throw lyapunov_error("lyapunov_exponent: insufficient smooth samples");
    est.exponent = acc / static_cast<double>(est.used);
    return est;
}

AttractorReport classify_attractor(MapKind kind, MapState x0, const ModelParams& p,
                                   const ClassifyBudget& budget) {
    validate(p);
    AttractorReport rep;
    double istar = drive_of_period(p.t_stim, p);
    MapState x = x0;

    auto divergent_report = [&](const MapState& last) {
        rep.kind = AttractorKind::divergent;
        rep.final_state = last;
        return rep;
    };

    // Transient.
    for (std::size_t n = 0; n < budget.transient; ++n) {
        detail::StepInfo info;
        try {
            info = detail::advance(kind, x, p);
        } catch (const stalled_error&) {
            return divergent_report(x);
        } catch (const domain_error&) {
            return divergent_report(x);
        }
        if (info.status == StepStatus::stalled) return divergent_report(x);
        x = info.next;
        if (info.status == StepStatus::divergent || detail::engine_divergent(x.drive))
            return divergent_report(x);
        if (kind == MapKind::order_preserving && !info.order_preserved) {
            rep.kind = AttractorKind::undecided;
            rep.final_state = x;
            return rep;
        }
    }

    // Fixed-point watch, then recurrence from up to three anchors.
    const std::size_t window = 4 * static_cast<std::size_t>(budget.max_period);
    std::size_t steps_left = budget.observe;
    for (int attempt = 0; attempt < 3 && steps_left >= window; ++attempt) {
        if (near_synchronous_point(kind, x, istar)) {
            rep.kind = AttractorKind::fixed_point;
            rep.period = 1;
            rep.bg_spikes_per_period = 1;
            rep.tones_per_period = 1;
            rep.final_state = x;
            return rep;
        }
        std::vector<MapState> orbit;
        std::vector<CycleRecord> cycles;
        orbit.reserve(window + 1);
        orbit.push_back(x);
        for (std::size_t n = 0; n < window; ++n) {
            detail::StepInfo info;
            try {
                info = detail::advance(kind, x, p);
            } catch (const std::exception&) {
                return divergent_report(x);
            }
            if (info.status == StepStatus::stalled) return divergent_report(x);
            x = info.next;
            if (info.status == StepStatus::divergent || detail::engine_divergent(x.drive))
                return divergent_report(x);
            if (kind == MapKind::order_preserving && !info.order_preserved) {
                rep.kind = AttractorKind::undecided;
                rep.final_state = x;
                return rep;
            }
            orbit.push_back(x);
            cycles.push_back(info.cycle);
            if (near_synchronous_point(kind, x, istar)) {
                rep.kind = AttractorKind::fixed_point;
                rep.period = 1;
                rep.bg_spikes_per_period = 1;
                rep.tones_per_period = 1;
                rep.final_state = x;
                return rep;
            }
        }
        steps_left -= window;

        // Period 1 is owned by the fixed-point watch above: the synchronous
        // point is the only 1-cycle of these maps, and a slow transient can
        // satisfy a lag-1 recurrence long before reaching it.
        for (int k = 2; k <= budget.max_period; ++k) {
            if (state_distance(kind, orbit[0], orbit[static_cast<std::size_t>(k)]) >= limits::recurrence_rel_tol)
                continue;
            bool confirmed = true;
            for (int j = 1; j < 2 * k && confirmed; ++j) {
                confirmed = state_distance(kind, orbit[static_cast<std::size_t>(j)],
                                           orbit[static_cast<std::size_t>(j + k)]) <
                            10.0 * limits::recurrence_rel_tol;
            }
            if (!confirmed) continue;
            rep.kind = AttractorKind::periodic;
            rep.period = k;
            rep.bg_spikes_per_period = k;
            rep.tones_per_period = 0;
            rep.order_switches_per_period = 0;
            for (int j = 0; j < k; ++j) {
                rep.tones_per_period += cycles[static_cast<std::size_t>(j)].tones_in_cycle;
                if (cycles[static_cast<std::size_t>(j)].order_switch) ++rep.order_switches_per_period;
            }
            rep.final_state = orbit[0];
            return rep;
        }
        // No recurrence at this anchor: let the orbit settle further.
    }

    // Bounded, non-recurring: estimate the Lyapunov exponent.
    rep.final_state = x;
    try {
        std::size_t n = std::min<std::size_t>(20000, std::max<std::size_t>(steps_left, 4000));
        auto est = lyapunov_exponent(kind, x, p, n);
        rep.lyapunov = est.exponent;
        rep.kind = est.exponent > limits::lyapunov_chaos_threshold ? AttractorKind::chaotic
                                                                   : AttractorKind::undecided;
    } catch (const lyapunov_error&) {
        rep.kind = AttractorKind::undecided;
    }
    return rep;
}

std::vector<BifurcationSample> bifurcation_scan_1d(const ModelParams& p, double delta_t_lo,
                                                   double delta_t_hi, std::size_t n_params,
                                                   std::size_t keep_samples, unsigned threads) {
    validate(p);
    if (n_params < 2) throw domain_error("bifurcation_scan_1d: need at least 2 parameter samples");
    std::vector<BifurcationSample> rows(n_params);
    parallel_for(n_params, threads, [&](std::size_t idx) {
        BifurcationSample& row = rows[idx];
        ModelParams q = p;
        q.delta_t = delta_t_lo + (delta_t_hi - delta_t_lo) * static_cast<double>(idx) /
                                     static_cast<double>(n_params - 1);
        row.delta_t = q.delta_t;
        MapState x{drive_of_period(q.t_stim, q) * 1.01, 0.0};
        auto rep = classify_attractor(MapKind::period_1d, x, q);
        row.divergent = rep.kind == AttractorKind::divergent;
        row.period = rep.kind == AttractorKind::periodic || rep.kind == AttractorKind::fixed_point
                         ? rep.period
                         : 0;
        if (!row.divergent) {
            MapState y = rep.final_state;
            row.samples.reserve(keep_samples);
            for (std::size_t n = 0; n < keep_samples; ++n) {
                row.samples.push_back(y.drive);
                auto info = detail::advance(MapKind::period_1d, y, q);
                if (info.status != StepStatus::ok) break;
                y = info.next;
            }
        }
    });
    return rows;
}

namespace {

// Generic period-doubling onset finder for a smooth 1D map family
// x -> f(x; c) with derivative fp(x; c), parameterized by c.
struct CascadeFamily {
    std::function<double(double, double)> f;        // (x, c)
    std::function<double(double, double)> fprime;   // (x, c)
    std::function<bool(double)> in_domain;          // x valid
    std::function<double(double)> attractor_seed;   // long-run iterate at c
    double c_start;                                 // below the first onset
    double first_step;                              // march step toward the first onset
};

struct CyclePoint {
    double x = 0.0;
    double multiplier = 0.0;
    bool ok = false;
};

// Newton-polish a point of the m-cycle of f(.; c) from x0; returns the cycle
// point and the orbit multiplier.
CyclePoint polish_cycle(const CascadeFamily& fam, int m, double c, double x0) {
    CyclePoint out;
    double x = x0;
    for (int it = 0; it < 200; ++it) {
        double y = x;
        double mu = 1.0;
        for (int j = 0; j < m; ++j) {
            if (!fam.in_domain(y)) return out;
            mu *= fam.fprime(y, c);
            y = fam.f(y, c);
        }
        if (!std::isfinite(y) || !std::isfinite(mu)) return out;
        double F = y - x;
        double Fp = mu - 1.0;
        if (std::fabs(Fp) < 1e-12) return out;
        double step = -F / Fp;
        double xn = x + step;
        for (int half = 0; half < 60 && !fam.in_domain(xn); ++half) {
            step *= 0.5;
            xn = x + step;
        }
        if (!fam.in_domain(xn)) return out;
        bool done = std::fabs(xn - x) <= 1e-13 * std::max(1.0, std::fabs(x));
        x = xn;
        if (done) break;
    }
    double y = x;
    double mu = 1.0;
    for (int j = 0; j < m; ++j) {
        if (!fam.in_domain(y)) return out;
        mu *= fam.fprime(y, c);
        y = fam.f(y, c);
    }
    if (std::fabs(y - x) > 1e-7 * std::max(1.0, std::fabs(x))) return out;
    out.x = x;
    out.multiplier = mu;
    out.ok = true;
    return out;
}

// March c upward tracking the m-cycle until its multiplier crosses -1, then
// bisect the crossing down to the parameter tolerance.
bool find_onset(const CascadeFamily& fam, int m, double c_from, double march_step, double& onset,
                double& seed_out) {
    double seed = fam.attractor_seed(c_from);
    CyclePoint cp = polish_cycle(fam, m, c_from, seed);
    if (!cp.ok || cp.multiplier <= -1.0) return false;
    double lo = c_from;
    double hi = lo;
    seed = cp.x;
    bool bracketed = false;
    for (int i = 0; i < 4000; ++i) {
        double c = hi + march_step;
        cp = polish_cycle(fam, m, c, seed);
        if (!cp.ok) return false;
        seed = cp.x;
        if (cp.multiplier < -1.0) {
            lo = hi;
            hi = c;
            bracketed = true;
            break;
        }
        hi = c;
    }
    if (!bracketed) return false;
    for (int i = 0; i < 200 && hi - lo > limits::bisection_param_tol; ++i) {
        double mid = 0.5 * (lo + hi);
        cp = polish_cycle(fam, m, mid, seed);
        if (!cp.ok) {
            hi = mid;
            continue;
        }
        seed = cp.x;
        (cp.multiplier > -1.0 ? lo : hi) = mid;
    }
    onset = 0.5 * (lo + hi);
    seed_out = seed;
    return true;
}

CascadeReport cascade(const CascadeFamily& fam, int k_max) {
    CascadeReport rep;
    double onset = 0.0;
    double seed = 0.0;
    if (!find_onset(fam, 1, fam.c_start, fam.first_step, onset, seed)) {
        rep.truncated = true;
        return rep;
    }
    rep.doubling_params.push_back(onset);  // onset of the period-2 orbit
    double gap_guess = fam.first_step * 8.0;
    for (int k = 2; k <= k_max; ++k) {
        int m = 1 << (k - 1);
        double prev = rep.doubling_params.back();
        if (rep.doubling_params.size() >= 2) {
            auto n = rep.doubling_params.size();
            gap_guess = (rep.doubling_params[n - 1] - rep.doubling_params[n - 2]) / 4.669;
        }
        double start = prev + gap_guess * 0.05;
        double step = gap_guess / 16.0;
        if (!find_onset(fam, m, start, step, onset, seed)) {
            rep.truncated = true;
            break;
        }
        rep.doubling_params.push_back(onset);
    }
    for (std::size_t j = 2; j < rep.doubling_params.size(); ++j) {
        double a = rep.doubling_params[j - 1] - rep.doubling_params[j - 2];
        double b = rep.doubling_params[j] - rep.doubling_params[j - 1];
        rep.ratios.push_back(a / b);
    }
    return rep;
}

}  // namespace

CascadeReport feigenbaum_ratios(const ModelParams& p, int k_max) {
    validate(p);
    if (!(p.t_stim > 0.0)) throw domain_error("feigenbaum_ratios: t_stim must be > 0");
    ModelParams base = p;
    double istar = drive_of_period(base.t_stim, base);
    double delta_c = 2.0 * istar * (istar - 1.0) / base.tau;

    CascadeFamily fam;
    fam.f = [base](double x, double c) {
        ModelParams q = base;
        q.delta_t = c;
        return x + c * (period_of_drive(x, q) - q.t_stim);
    };
    fam.fprime = [base](double x, double c) { return 1.0 - c * base.tau / (x * (x - 1.0)); };
    fam.in_domain = [](double x) { return x > 1.0 && x < limits::drive_ceiling; };
    fam.attractor_seed = [base, istar](double c) {
        ModelParams q = base;
        q.delta_t = c;
        double x = istar * 1.01;
        for (int n = 0; n < 100000; ++n) {
            double t = period_of_drive(x, q);
            x = x + c * (t - q.t_stim);
            if (!(x > 1.0)) return istar;
        }
        return x;
    };
    fam.c_start = delta_c * 0.9;
    fam.first_step = delta_c * 0.025;
    return cascade(fam, k_max);
}

CascadeReport feigenbaum_ratios_logistic(int k_max) {
    CascadeFamily fam;
    fam.f = [](double x, double r) { return r * x * (1.0 - x); };
    fam.fprime = [](double x, double r) { return r * (1.0 - 2.0 * x); };
    fam.in_domain = [](double x) { return x > 0.0 && x < 1.0; };
    fam.attractor_seed = [](double r) {
        double x = 0.5;
        for (int n = 0; n < 100000; ++n) x = r * x * (1.0 - x);
        return x;
    };
    fam.c_start = 2.8;
    fam.first_step = 0.05;
    return cascade(fam, k_max);
}

std::vector<BasinCell> basin_scan(MapKind kind, const BasinGrid& grid, const ModelParams& p,
                                  const ClassifyBudget& budget, unsigned threads) {
    validate(p);
    std::vector<BasinCell> cells(grid.n_drive * grid.n_phase);
    double istar = drive_of_period(p.t_stim, p);
    parallel_for(cells.size(), threads, [&](std::size_t idx) {
        std::size_t iy = idx / grid.n_drive;
        std::size_t ix = idx % grid.n_drive;
        BasinCell& cell = cells[idx];
        cell.x0.drive = grid.n_drive == 1 ? grid.drive_lo
                                          : grid.drive_lo + (grid.drive_hi - grid.drive_lo) *
                                                                static_cast<double>(ix) /
                                                                static_cast<double>(grid.n_drive - 1);
        cell.x0.phase = grid.n_phase == 1 ? grid.phase_lo
                                          : grid.phase_lo + (grid.phase_hi - grid.phase_lo) *
                                                                static_cast<double>(iy) /
                                                                static_cast<double>(grid.n_phase - 1);

        MapState x = cell.x0;
        std::size_t total = budget.transient + budget.observe;
        for (std::size_t n = 0; n < total; ++n) {
            detail::StepInfo info;
            try {
                info = detail::advance(kind, x, p);
            } catch (const std::exception&) {
                cell.kind = AttractorKind::divergent;
                return;
            }
            if (info.status == StepStatus::stalled) {
                cell.kind = AttractorKind::divergent;
                return;
            }
            x = info.next;
            if (info.cycle.order_switch) ++cell.order_switches;
            if (info.status == StepStatus::divergent || detail::engine_divergent(x.drive)) {
                cell.kind = AttractorKind::divergent;
                return;
            }
            if (kind == MapKind::order_preserving && !info.order_preserved) {
                cell.kind = AttractorKind::undecided;
                return;
            }
            if (near_synchronous_point(kind, x, istar)) {
                cell.kind = AttractorKind::fixed_point;
                cell.phase_label = (x.phase < 0.5) ? 0 : 1;
                return;
            }
        }
        auto rep = classify_attractor(kind, x, p, budget);
        cell.kind = rep.kind;
    });
    return cells;
}

}  // namespace beatgen
