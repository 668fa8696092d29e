#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "beatgen/model.hpp"

namespace beatgen {

/// Calibrated membrane time constant (ms). The published parameter tables
/// give (t_stim, delta_t, delta_phi) only; this value of tau reproduces the
/// reference phenomenology (the period-5/period-4/chaotic/divergent/period-104
/// catalog and the cascade ratios) and ships as the repository default.
inline constexpr double default_tau = 1000.0;

/// Alternative calibration: the tau at which delta_t = 0.005 gives a
/// zero-slope fixed point for a 500 ms stimulus (fastest 1D convergence).
inline constexpr double slope_zero_tau = 1266.3243603998881;

struct Preset {
    std::string_view name;
    ModelParams params;
    std::string_view note;
};

/// Named parameter sets, one per published figure row, all carrying the
/// calibrated tau.
std::span<const Preset> preset_catalog();

/// Case-sensitive lookup; returns std::nullopt when the name is unknown.
std::optional<Preset> find_preset(std::string_view name);

}  // namespace beatgen
