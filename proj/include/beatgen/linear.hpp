#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "beatgen/model.hpp"

namespace beatgen {

/// Slope of the free-running period with respect to drive, evaluated at I:
/// g(I) = dT/dI = -tau / (I (I - 1)). Negative on (1, inf), increasing in I.
double g_of_i(double drive, const ModelParams& p);

/// Closed-form eigenvalues of the order-preserving map linearized at the
/// synchronous fixed point (I*, phi*) with phi* in {0, 1}:
///   lambda = 1 + A/2 +- sqrt(A^2 + 4 (delta_phi/t_stim) g) / 2,
///   A = (delta_t + (delta_phi/t_stim)(1 - phi*)) g(I*).
std::array<std::complex<double>, 2> eigenvalues_at_fixed_point(double phi_star, const ModelParams& p);

enum class StabilityClass : std::uint8_t {
    stable_node,
    stable_spiral,
    unstable_node,
    unstable_spiral,
    non_hyperbolic
};

const char* to_string(StabilityClass c);

struct StabilityReport {
    MapState fixed_point;
    std::array<std::complex<double>, 2> eigenvalues;
    StabilityClass cls = StabilityClass::non_hyperbolic;
};

/// Classify the fixed point at phi* in {0, 1}: spiral when the eigenvalue
/// radicand is negative, stable when both moduli are < 1, non-hyperbolic
/// inside a band of width limits::non_hyperbolic_band around modulus 1.
StabilityReport classify_fixed_point(double phi_star, const ModelParams& p);

/// Rectangle in the (delta_t, delta_phi) learning-rate plane.
struct ParamWindow {
    double delta_t_lo = 0.0;
    double delta_t_hi = 0.01;
    double delta_phi_lo = 0.0;
    double delta_phi_hi = 7.0;
};

enum class BoundaryKind : std::uint8_t {
    lambda_minus_one_phi0,   ///< a real eigenvalue of the phi* = 0 point equals -1
    lambda_minus_one_phi1,   ///< a real eigenvalue of the phi* = 1 point equals -1
    unit_modulus_phi1,       ///< complex eigenvalues of the phi* = 1 point on the unit circle
    discriminant_zero_phi0,  ///< node/spiral transition of the phi* = 0 point
    discriminant_zero_phi1   ///< node/spiral transition of the phi* = 1 point
};

const char* to_string(BoundaryKind k);

struct BoundaryCurve {
    BoundaryKind kind;
    std::vector<std::array<double, 2>> points;  ///< (delta_t, delta_phi), sorted
};

struct no_crossing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trace one stability/discriminant boundary inside a window by scan-line
/// bisection (both scan directions, roots refined to
/// limits::bisection_param_tol). Every emitted point satisfies the defining
/// scalar equation with residual below limits::boundary_residual_tol.
/// Throws no_crossing_error when no scan line brackets the condition.
BoundaryCurve trace_boundary(BoundaryKind kind, const ParamWindow& window, std::size_t scan_lines,
                             const ModelParams& base);

/// Residual of the defining scalar equation of a boundary at a point
/// (zero exactly on the curve). Exposed for verification.
double boundary_residual(BoundaryKind kind, double delta_t, double delta_phi, const ModelParams& base);

/// The nine stability signatures of the (phi = 0, phi = 1) fixed-point pair.
enum class Region : std::uint8_t { I, II, III, IV, V, VI, VII, VIII, IX, unmatched };

const char* to_string(Region r);

struct RegionLabel {
    double delta_t = 0.0;
    double delta_phi = 0.0;
    Region region = Region::unmatched;
    StabilityClass class_phi0 = StabilityClass::non_hyperbolic;
    StabilityClass class_phi1 = StabilityClass::non_hyperbolic;
    bool flagged = false;  ///< true when a class is non-hyperbolic (boundary straddle)
};

/// Map the (class_phi0, class_phi1) pair onto a region, or unmatched.
Region region_of(StabilityClass phi0, StabilityClass phi1);

/// Classify every cell center of an nx-by-ny grid over the window.
/// Cells are emitted in row-major order (delta_phi outer, delta_t inner),
/// independent of the worker count.
std::vector<RegionLabel> region_map(const ParamWindow& window, std::size_t nx, std::size_t ny,
                                    const ModelParams& base, unsigned threads = 0);

/// The three critical delta_t curves of the 1D period map as functions of
/// the stimulus period: loss of stability (2 I*(I*-1)/tau), fastest
/// convergence (half of that), and divergence (the smallest delta_t at which
/// the local minimum of the map touches drive 1, found by bracketed
/// bisection).
struct CriticalCurves1D {
    std::vector<double> t_stim;
    std::vector<double> stability_loss;
    std::vector<double> optimal;
    std::vector<double> divergence;
    std::vector<std::uint8_t> divergence_found;  ///< per-sample root-finder success
};

CriticalCurves1D critical_delta_curves_1d(double t_stim_lo, double t_stim_hi, std::size_t samples,
                                          const ModelParams& base);

}  // namespace beatgen
