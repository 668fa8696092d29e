#pragma once

#include "beatgen/orbit.hpp"

namespace beatgen {

/// Outcome of checking one reference behavior at a given tau.
struct ReferenceCheck {
    bool ok = false;
    AttractorReport observed;  ///< canonical-initial-condition result, for diagnostics
};

/// The distinguishing long-run behaviors of the published parameter catalog
/// at t_stim = 500 ms, used to calibrate tau (which the catalog omits):
///   fig8b: period 5 with 2 order switches
///   fig8c: period 4 with 4 spikes and 3 tones
///   fig8d: chaotic (bounded, no period <= 512, Lyapunov > 0.01)
///   fig8e: divergent (drive pushed to <= 1)
///   fig8f: period 104
///   fig6c: period 3 with per-cycle tone counts {2, 1, 0}
struct ReferenceLabels {
    ReferenceCheck fig8b, fig8c, fig8d, fig8e, fig8f, fig6c;
    int reproduced() const;
};

/// Evaluate all reference behaviors at the given tau. Each behavior counts as
/// reproduced when the canonical initial condition (drive 2.5, phase 0.3) or
/// any member of a small deterministic fallback panel lands on it.
ReferenceLabels check_reference_labels(double tau);

}  // namespace beatgen
