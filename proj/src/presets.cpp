#include "beatgen/presets.hpp"

#include <array>

namespace beatgen {

namespace {

// tau is not part of the published tables; every preset carries the
// calibrated default (see presets.hpp).
constexpr std::array<Preset, 13> k_presets{{
    {"fig3", {default_tau, 500.0, 0.005, 0.5}, "order-preserving convergence example"},
    {"fig4", {default_tau, 500.0, 0.005, 0.5}, "alias of fig3 (phase-delay/advance basins)"},
    {"fig6a", {default_tau, 500.0, 0.002, 2.5}, "transient order switching"},
    {"fig6b", {default_tau, 500.0, 0.002, 2.5}, "alias of fig6a (phase plane)"},
    {"fig6c", {default_tau, 500.0, 0.005, 3.5}, "period-3 orbit, tone counts 2/1/0"},
    {"fig6d", {default_tau, 500.0, 0.005, 3.5}, "alias of fig6c (phase plane)"},
    {"fig8a", {default_tau, 500.0, 0.0045, 1.5}, "spiral-in with one order switch"},
    {"fig8b", {default_tau, 500.0, 0.002, 3.0}, "period-5 orbit, 2 order switches"},
    {"fig8c", {default_tau, 500.0, 0.002, 4.5}, "period-4 orbit, 4 spikes / 3 tones"},
    {"fig8d", {default_tau, 500.0, 0.0055, 4.5}, "chaotic attractor"},
    {"fig8e", {default_tau, 500.0, 0.0045, 6.5}, "divergent (drive pushed below 1)"},
    {"fig8f", {default_tau, 500.0, 0.008, 3.8}, "period-104 orbit, frequent order switching"},
    {"tau-slope-zero", {slope_zero_tau, 500.0, 0.005, 0.5}, "alternative tau calibration"},
}};

}  // namespace

std::span<const Preset> preset_catalog() { return k_presets; }

std::optional<Preset> find_preset(std::string_view name) {
    for (const auto& p : k_presets)
        if (p.name == name) return p;
    return std::nullopt;
}

}  // namespace beatgen
