#include "beatgen/lif.hpp"

#include <cmath>

namespace beatgen {

double period_of_drive(double drive, const ModelParams& p) {
    if (!in_drive_domain(drive)) throw domain_error("period_of_drive: drive must be > 1");
    // tau * ln(I/(I-1)) written as log1p(1/(I-1)) for accuracy at large I.
    return p.tau * std::log1p(1.0 / (drive - 1.0));
}

double drive_of_period(double period, const ModelParams& p) {
    if (!(period > 0.0)) throw domain_error("drive_of_period: period must be > 0");
    return 1.0 / (-std::expm1(-period / p.tau));
}

double membrane_voltage(double drive, double elapsed, double tau) {
    return drive * (-std::expm1(-elapsed / tau));
}

double time_to_threshold(double v0, double drive, double tau) {
    if (v0 >= 1.0) return 0.0;
    if (!(drive > 1.0)) throw stalled_error("time_to_threshold: drive <= 1, threshold never reached");
    // (drive - v0)/(drive - 1) = 1 + (1 - v0)/(drive - 1)
    return tau * std::log1p((1.0 - v0) / (drive - 1.0));
}

}  // namespace beatgen
