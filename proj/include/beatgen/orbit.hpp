#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "beatgen/model.hpp"

namespace beatgen {

enum class MapKind : std::uint8_t { period_1d, order_preserving, oieb };

const char* to_string(MapKind k);

enum class Termination : std::uint8_t { completed, stalled, divergent, order_violation };

const char* to_string(Termination t);

/// Iterated orbit. states[0] is the initial condition; cycles[k] describes
/// the step from states[k] to states[k+1].
struct Trajectory {
    std::vector<MapState> states;
    std::vector<CycleRecord> cycles;
    Termination termination = Termination::completed;
};

/// Iterate a map for up to `steps` steps, stopping early on stall,
/// divergence (drive outside (1 + 1e-12, 1e6)), or — for the
/// order-preserving map — a phase leaving [0, 1].
Trajectory iterate(MapKind kind, MapState x0, const ModelParams& p, std::size_t steps);

enum class AttractorKind : std::uint8_t { fixed_point, periodic, chaotic, divergent, undecided };

const char* to_string(AttractorKind k);

struct AttractorReport {
    AttractorKind kind = AttractorKind::undecided;
    int period = 0;
    int order_switches_per_period = 0;
    int bg_spikes_per_period = 0;
    int tones_per_period = 0;
    double lyapunov = std::numeric_limits<double>::quiet_NaN();
    MapState final_state{};
};

struct ClassifyBudget {
    std::size_t transient = 10000;
    std::size_t observe = 100000;
    int max_period = limits::max_detected_period;
};

/// Long-run classification, decided in order: divergence (including a stall,
/// which means the phase rule pushed the drive to <= 1); convergence to the
/// synchronous fixed point (scaled distance < 1e-9, phase on the circle);
/// minimal-period recurrence (relative tolerance 1e-8); positive Lyapunov
/// estimate (> 0.01) for chaos; otherwise undecided.
AttractorReport classify_attractor(MapKind kind, MapState x0, const ModelParams& p,
                                   const ClassifyBudget& budget = {});

struct lyapunov_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LyapunovEstimate {
    double exponent = 0.0;
    std::size_t used = 0;      ///< steps contributing to the average
    std::size_t excluded = 0;  ///< steps straddling a map discontinuity
};

/// Two-trajectory Lyapunov estimate: initial separation 1e-9, renormalized
/// every step. Steps on which the pair straddles a discontinuity (phase-rule
/// sign flip, tone-indicator flip, or differing mod wrap) are excluded.
/// Throws lyapunov_error when more than half the steps are excluded or a
/// trajectory leaves the domain.
LyapunovEstimate lyapunov_exponent(MapKind kind, MapState x0, const ModelParams& p, std::size_t steps);

struct BifurcationSample {
    double delta_t = 0.0;
    int period = 0;  ///< 0 when no recurrence was found (aperiodic)
    bool divergent = false;
    std::vector<double> samples;  ///< post-transient attractor samples
};

/// Attractor of the 1D period map on a grid of delta_t values.
std::vector<BifurcationSample> bifurcation_scan_1d(const ModelParams& p, double delta_t_lo,
                                                   double delta_t_hi, std::size_t n_params,
                                                   std::size_t keep_samples, unsigned threads = 0);

/// Period-doubling cascade summary. doubling_params[k-1] is the parameter at
/// the onset of the period-2^k orbit; ratios[j] is
/// (d_{j+1} - d_j) / (d_{j+2} - d_{j+1}), converging to ~4.669.
struct CascadeReport {
    std::vector<double> doubling_params;
    std::vector<double> ratios;
    bool truncated = false;
};

/// Cascade of the 1D period map in delta_t at fixed (tau, t_stim). Onsets are
/// bracketed by continuation in the cycle multiplier and bisected to 1e-10.
CascadeReport feigenbaum_ratios(const ModelParams& p, int k_max);

/// Same machinery applied to the logistic map x -> r x (1 - x): the built-in
/// validation target with known ratio limit 4.669.
CascadeReport feigenbaum_ratios_logistic(int k_max);

struct BasinGrid {
    double drive_lo = 1.5;
    double drive_hi = 5.0;
    std::size_t n_drive = 16;
    double phase_lo = 0.0;
    double phase_hi = 1.0;
    std::size_t n_phase = 16;
};

struct BasinCell {
    MapState x0{};
    AttractorKind kind = AttractorKind::undecided;
    int phase_label = -1;    ///< 0 or 1 for fixed-point cells, else -1
    int order_switches = 0;  ///< switches observed before convergence/termination
};

/// Classify every cell of an initial-condition grid. Cells are emitted in
/// row-major order (phase outer, drive inner), deterministic for any worker
/// count.
std::vector<BasinCell> basin_scan(MapKind kind, const BasinGrid& grid, const ModelParams& p,
                                  const ClassifyBudget& budget = {}, unsigned threads = 0);

namespace detail {

/// One step of any map with the branch signature needed for discontinuity
/// tracking.
struct StepInfo {
    MapState next{};
    CycleRecord cycle{};
    StepStatus status = StepStatus::ok;
    bool order_preserved = true;
    bool tone_in_cycle = true;  ///< h_s outcome (oieb); true for the other maps
    int wraps = 0;              ///< mod wraps applied to the phase (oieb)
};

StepInfo advance(MapKind kind, const MapState& s, const ModelParams& p);

inline bool engine_divergent(double drive) {
    return !(drive > limits::drive_floor) || drive > limits::drive_ceiling;
}

}  // namespace detail

}  // namespace beatgen
