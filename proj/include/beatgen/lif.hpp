#pragma once

#include "beatgen/model.hpp"

namespace beatgen {

/// Free-running oscillation period of the beat generator at a given drive:
/// T(I) = tau * ln(I / (I - 1)). Strictly decreasing in I on (1, inf).
/// Throws domain_error for drive <= 1 (no oscillation).
double period_of_drive(double drive, const ModelParams& p);

/// Inverse of period_of_drive: I(T) = 1 / (1 - exp(-T/tau)), always > 1.
/// Throws domain_error for period <= 0.
double drive_of_period(double period, const ModelParams& p);

/// Membrane voltage reached after `elapsed` ms of charging from reset (v = 0)
/// under a constant drive: v = drive * (1 - exp(-elapsed/tau)).
double membrane_voltage(double drive, double elapsed, double tau);

/// Time for the membrane to charge from v0 to threshold (1) under a constant
/// drive: tau * ln((drive - v0) / (drive - 1)). Returns 0 when v0 >= 1.
/// Throws stalled_error when the threshold is never reached
/// (drive <= 1, or drive <= v0 with v0 < 1).
double time_to_threshold(double v0, double drive, double tau);

}  // namespace beatgen
