#pragma once

#include <cstdint>
#include <vector>

#include "mwprec/waveform.hpp"

namespace mwprec {

inline constexpr double kSpeedOfLight = 2.998e8; // m/s

struct Scatterer {
    double cross_section = 1.0; // unitless, [0, 1]
    double range_offset = 0.0;  // meters, [0, 10]
    double spin_radius = 0.0;   // meters, [0, 1]
    double spin_phase = 0.0;    // radians, [0, 2*pi)
};

// Randomized multi-scattering-center target description.
struct TargetScene {
    std::vector<Scatterer> scatterers; // 1..12 entries
    double radial_velocity = 0.0;      // m/s, [0, 300]
    double rotation_rate = 0.0;        // rad/s, [0, 0.2]

    void validate() const;
};

// Up-chirp: amplitude * sin(2*pi*(f_start*t + 0.5*(f_stop-f_start)/duration*t^2)).
Waveform gen_lfm(double f_start, double f_stop, double duration, double sample_rate,
                 double amplitude);

// Welch-Costas hop sequence a_i = g^i mod p, i = 1..p-1. Each hop plays a
// phase-continuous sine at base_freq + (a_i - 1) * hop_spacing.
Waveform gen_costas(int prime, int primitive_root, double base_freq, double hop_spacing,
                    double hop_duration, double sample_rate);

std::vector<int> costas_sequence(int prime, int primitive_root);
bool is_prime(int n);
bool is_primitive_root(int g, int p);

TargetScene sample_target_scene(uint64_t rng_seed);

// echo(t) = sum_i sigma_i * tx(t - tau_i(t)),
// tau_i(t) = 2*R_i(t)/c, R_i(t) = range + v*t + spin_radius*sin(rot*t + phase).
// Fractional delays via windowed-sinc interpolation; output has tx length.
Waveform synthesize_echo(const Waveform& tx, const TargetScene& scene);

} // namespace mwprec
