#include "beatgen/linear.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "beatgen/lif.hpp"
#include "beatgen/maps.hpp"
#include "beatgen/parallel.hpp"

namespace beatgen {

double g_of_i(double drive, const ModelParams& p) {
    if (!in_drive_domain(drive)) throw domain_error("g_of_i: drive must be > 1");
    return -p.tau / (drive * (drive - 1.0));
}

std::array<std::complex<double>, 2> eigenvalues_at_fixed_point(double phi_star, const ModelParams& p) {
    validate(p);
    double istar = drive_of_period(p.t_stim, p);
    double g = g_of_i(istar, p);
    double a = (p.delta_t + p.delta_phi / p.t_stim * (1.0 - phi_star)) * g;
    double radicand = a * a + 4.0 * p.delta_phi * g / p.t_stim;
    std::complex<double> root = std::sqrt(std::complex<double>(radicand, 0.0));
    std::complex<double> mean(1.0 + 0.5 * a, 0.0);
    return {mean + 0.5 * root, mean - 0.5 * root};
}

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::stable_node: return "stable node";
        case StabilityClass::stable_spiral: return "stable spiral";
        case StabilityClass::unstable_node: return "unstable node";
        case StabilityClass::unstable_spiral: return "unstable spiral";
        case StabilityClass::non_hyperbolic: return "non-hyperbolic";
    }
    return "?";
}

StabilityReport classify_fixed_point(double phi_star, const ModelParams& p) {
    StabilityReport r;
    double istar = drive_of_period(p.t_stim, p);
    r.fixed_point = MapState{istar, phi_star};
    r.eigenvalues = eigenvalues_at_fixed_point(phi_star, p);

    double g = g_of_i(istar, p);
    double a = (p.delta_t + p.delta_phi / p.t_stim * (1.0 - phi_star)) * g;
    double radicand = a * a + 4.0 * p.delta_phi * g / p.t_stim;
    bool spiral = radicand < 0.0;

    double mod = std::max(std::abs(r.eigenvalues[0]), std::abs(r.eigenvalues[1]));
    if (std::fabs(mod - 1.0) < limits::non_hyperbolic_band) {
        r.cls = StabilityClass::non_hyperbolic;
    } else if (mod < 1.0) {
        r.cls = spiral ? StabilityClass::stable_spiral : StabilityClass::stable_node;
    } else {
        r.cls = spiral ? StabilityClass::unstable_spiral : StabilityClass::unstable_node;
    }
    return r;
}

const char* to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::lambda_minus_one_phi0: return "lambda-minus-one-phi0";
        case BoundaryKind::lambda_minus_one_phi1: return "lambda-minus-one-phi1";
        case BoundaryKind::unit_modulus_phi1: return "unit-modulus-phi1";
        case BoundaryKind::discriminant_zero_phi0: return "discriminant-zero-phi0";
        case BoundaryKind::discriminant_zero_phi1: return "discriminant-zero-phi1";
    }
    return "?";
}

namespace {

struct LinearCoeffs {
    double g = 0.0;  // g(I*), constant over the learning-rate plane
};

LinearCoeffs coeffs(const ModelParams& base) {
    ModelParams p = base;
    p.delta_t = 0.0;
    p.delta_phi = 0.0;
    validate(p);
    return {g_of_i(drive_of_period(p.t_stim, p), p)};
}

// Scalar conditions. trace = 2 + A, det = 1 + A - (delta_phi/t_stim) g,
// A = (delta_t + (delta_phi/t_stim)(1 - phi*)) g.
double residual_impl(BoundaryKind kind, double dt, double dp, double g, double t_stim) {
    double w = dp * g / t_stim;
    switch (kind) {
        case BoundaryKind::lambda_minus_one_phi0: {
            double a = (dt + dp / t_stim) * g;
            return 1.0 + (2.0 + a) + (1.0 + a - w);  // 1 + trace + det = 0 at lambda = -1
        }
        case BoundaryKind::lambda_minus_one_phi1: {
            double a = dt * g;
            return 1.0 + (2.0 + a) + (1.0 + a - w);
        }
        case BoundaryKind::unit_modulus_phi1: {
            double a = dt * g;
            double radicand = a * a + 4.0 * w;
            if (radicand >= 0.0) return std::numeric_limits<double>::quiet_NaN();  // not complex here
            return (1.0 + a - w) - 1.0;  // |lambda|^2 = det = 1
        }
        case BoundaryKind::discriminant_zero_phi0: {
            double a = (dt + dp / t_stim) * g;
            return a * a + 4.0 * w;
        }
        case BoundaryKind::discriminant_zero_phi1: {
            double a = dt * g;
            return a * a + 4.0 * w;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Bisect a sign change of r on [lo, hi]. Bisection is cheap here, so run it
// to full precision (well inside limits::bisection_param_tol); that keeps the
// residual of steep conditions far below the emission tolerance.
double bisect(const std::function<double(double)>& r, double lo, double hi) {
    double flo = r(lo);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = r(mid);
        if (std::isnan(fm)) break;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Scan r along [lo, hi] with `segments` subdivisions; bisect every bracketed
// sign change. NaN cells (outside the condition's validity set) are skipped.
void scan_roots(const std::function<double(double)>& r, double lo, double hi, std::size_t segments,
                std::vector<double>& out) {
    double prev_x = lo;
    double prev_f = r(lo);
    for (std::size_t i = 1; i <= segments; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(segments);
        double f = r(x);
        if (!std::isnan(prev_f) && !std::isnan(f) && (prev_f < 0.0) != (f < 0.0))
            out.push_back(bisect(r, prev_x, x));
        prev_x = x;
        prev_f = f;
    }
}

}  // namespace

double boundary_residual(BoundaryKind kind, double delta_t, double delta_phi, const ModelParams& base) {
    auto c = coeffs(base);
    return residual_impl(kind, delta_t, delta_phi, c.g, base.t_stim);
}

BoundaryCurve trace_boundary(BoundaryKind kind, const ParamWindow& window, std::size_t scan_lines,
                             const ModelParams& base) {
    if (scan_lines < 2) throw domain_error("trace_boundary: need at least 2 scan lines");
    auto c = coeffs(base);
    auto residual = [&](double dt, double dp) { return residual_impl(kind, dt, dp, c.g, base.t_stim); };

    BoundaryCurve curve{kind, {}};
    const std::size_t sub = 4 * scan_lines;
    // Vertical scan lines: roots in delta_phi at fixed delta_t.
    for (std::size_t i = 0; i < scan_lines; ++i) {
        double dt = window.delta_t_lo +
                    (window.delta_t_hi - window.delta_t_lo) * static_cast<double>(i) / static_cast<double>(scan_lines - 1);
        std::vector<double> roots;
        scan_roots([&](double dp) { return residual(dt, dp); }, window.delta_phi_lo, window.delta_phi_hi, sub, roots);
        for (double dp : roots) curve.points.push_back({dt, dp});
    }
    // Horizontal scan lines: roots in delta_t at fixed delta_phi (captures
    // steep curves and the delta_phi = 0 edge).
    for (std::size_t i = 0; i < scan_lines; ++i) {
        double dp = window.delta_phi_lo +
                    (window.delta_phi_hi - window.delta_phi_lo) * static_cast<double>(i) / static_cast<double>(scan_lines - 1);
        std::vector<double> roots;
        scan_roots([&](double dt) { return residual(dt, dp); }, window.delta_t_lo, window.delta_t_hi, sub, roots);
        for (double dt : roots) curve.points.push_back({dt, dp});
    }
    if (curve.points.empty()) throw no_crossing_error("trace_boundary: no crossing in window");

    std::sort(curve.points.begin(), curve.points.end());
    // Keep only points that genuinely satisfy the defining equation.
    std::erase_if(curve.points, [&](const std::array<double, 2>& q) {
        double r = residual(q[0], q[1]);
        return std::isnan(r) || std::fabs(r) > limits::boundary_residual_tol;
    });
    if (curve.points.empty()) throw no_crossing_error("trace_boundary: no crossing in window");
    return curve;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV: return "IV";
        case Region::V: return "V";
        case Region::VI: return "VI";
        case Region::VII: return "VII";
        case Region::VIII: return "VIII";
        case Region::IX: return "IX";
        case Region::unmatched: return "unmatched";
    }
    return "?";
}

Region region_of(StabilityClass phi0, StabilityClass phi1) {
    using S = StabilityClass;
    if (phi0 == S::stable_node && phi1 == S::stable_node) return Region::I;
    if (phi0 == S::stable_node && phi1 == S::stable_spiral) return Region::II;
    if (phi0 == S::stable_spiral && phi1 == S::stable_spiral) return Region::III;
    if (phi0 == S::stable_spiral && phi1 == S::unstable_spiral) return Region::IV;
    if (phi0 == S::stable_node && phi1 == S::unstable_spiral) return Region::V;
    if (phi0 == S::unstable_node && phi1 == S::unstable_spiral) return Region::VI;
    if (phi0 == S::unstable_node && phi1 == S::stable_spiral) return Region::VII;
    if (phi0 == S::unstable_node && phi1 == S::stable_node) return Region::VIII;
    if (phi0 == S::unstable_node && phi1 == S::unstable_node) return Region::IX;
    return Region::unmatched;
}

std::vector<RegionLabel> region_map(const ParamWindow& window, std::size_t nx, std::size_t ny,
                                    const ModelParams& base, unsigned threads) {
    std::vector<RegionLabel> cells(nx * ny);
    parallel_for(nx * ny, threads, [&](std::size_t idx) {
        std::size_t iy = idx / nx;
        std::size_t ix = idx % nx;
        ModelParams p = base;
        p.delta_t = window.delta_t_lo +
                    (window.delta_t_hi - window.delta_t_lo) * (static_cast<double>(ix) + 0.5) / static_cast<double>(nx);
        p.delta_phi = window.delta_phi_lo +
                      (window.delta_phi_hi - window.delta_phi_lo) * (static_cast<double>(iy) + 0.5) / static_cast<double>(ny);
        RegionLabel& cell = cells[idx];
        cell.delta_t = p.delta_t;
        cell.delta_phi = p.delta_phi;
        cell.class_phi0 = classify_fixed_point(0.0, p).cls;
        cell.class_phi1 = classify_fixed_point(1.0, p).cls;
        cell.flagged = cell.class_phi0 == StabilityClass::non_hyperbolic ||
                       cell.class_phi1 == StabilityClass::non_hyperbolic;
        cell.region = cell.flagged ? Region::unmatched : region_of(cell.class_phi0, cell.class_phi1);
    });
    return cells;
}

CriticalCurves1D critical_delta_curves_1d(double t_stim_lo, double t_stim_hi, std::size_t samples,
                                          const ModelParams& base) {
    if (!(t_stim_lo > 0.0) || !(t_stim_hi > t_stim_lo)) throw domain_error("critical_delta_curves_1d: bad range");
    if (samples < 2) throw domain_error("critical_delta_curves_1d: need at least 2 samples");

    CriticalCurves1D out;
    out.t_stim.resize(samples);
    out.stability_loss.resize(samples);
    out.optimal.resize(samples);
    out.divergence.resize(samples);
    out.divergence_found.resize(samples);

    for (std::size_t k = 0; k < samples; ++k) {
        double ts = t_stim_lo + (t_stim_hi - t_stim_lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
        ModelParams p = base;
        p.t_stim = ts;
        double istar = drive_of_period(ts, p);
        out.t_stim[k] = ts;
        out.stability_loss[k] = 2.0 * istar * (istar - 1.0) / p.tau;
        out.optimal[k] = istar * (istar - 1.0) / p.tau;

        // Divergence: smallest delta_t with f(i_min) = 1.
        auto overshoot = [&](double dt) {
            ModelParams q = p;
            q.delta_t = dt;
            double imin = period_map_minimum_drive(q);
            return step_period_map(imin, q) - 1.0;  // positive while bounded
        };
        double lo = out.stability_loss[k];
        double hi = lo;
        bool found = false;
        for (int grow = 0; grow < 60; ++grow) {
            hi *= 2.0;
            if (overshoot(hi) < 0.0) {
                found = true;
                break;
            }
            lo = hi;
        }
        out.divergence_found[k] = found ? 1 : 0;
        if (found) {
            for (int i = 0; i < 200 && hi - lo > limits::bisection_param_tol; ++i) {
                double mid = 0.5 * (lo + hi);
                (overshoot(mid) > 0.0 ? lo : hi) = mid;
            }
            out.divergence[k] = 0.5 * (lo + hi);
        } else {
            out.divergence[k] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

}  // namespace beatgen
