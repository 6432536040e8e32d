#include "mwprec/signals.hpp"

#include <cmath>
#include <string>

#include "mwprec/errors.hpp"
#include "mwprec/rng.hpp"
#include "mwprec/sinc_interp.hpp"

namespace mwprec {

void TargetScene::validate() const {
    if (scatterers.empty() || scatterers.size() > 12)
        throw PreconditionError("TargetScene: scatterer count must be in [1, 12]");
    for (const auto& s : scatterers) {
        if (s.cross_section < 0.0 || s.cross_section > 1.0)
            throw PreconditionError("TargetScene: cross_section outside [0, 1]");
        if (s.range_offset < 0.0 || s.range_offset > 10.0)
            throw PreconditionError("TargetScene: range_offset outside [0, 10] m");
        if (s.spin_radius < 0.0 || s.spin_radius > 1.0)
            throw PreconditionError("TargetScene: spin_radius outside [0, 1] m");
    }
    if (radial_velocity < 0.0 || radial_velocity > 300.0)
        throw PreconditionError("TargetScene: radial_velocity outside [0, 300] m/s");
    if (rotation_rate < 0.0 || rotation_rate > 0.2)
        throw PreconditionError("TargetScene: rotation_rate outside [0, 0.2] rad/s");
}

Waveform gen_lfm(double f_start, double f_stop, double duration, double sample_rate,
                 double amplitude) {
    const double nyquist = sample_rate / 2.0;
    if (f_start < 0.0 || f_stop < 0.0 || f_start >= nyquist || f_stop >= nyquist)
        throw PreconditionError("gen_lfm: frequency at or above Nyquist (" +
                                std::to_string(nyquist) + " Hz) would alias");
    if (duration <= 0.0) throw PreconditionError("gen_lfm: duration must be positive");

    const auto n = static_cast<size_t>(std::llround(duration * sample_rate));
    const double slope = (f_stop - f_start) / (2.0 * duration);
    Waveform w;
    w.sample_rate = sample_rate;
    w.label = "lfm";
    w.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        w.samples[i] = amplitude * std::sin(2.0 * M_PI * (f_start * t + slope * t * t));
    }
    return w;
}

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; static_cast<long>(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_primitive_root(int g, int p) {
    if (g <= 0 || g >= p) return false;
    // g is a primitive root mod p iff its powers hit all of 1..p-1
    std::vector<bool> seen(p, false);
    long x = 1;
    for (int i = 1; i < p; ++i) {
        x = (x * g) % p;
        if (seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

std::vector<int> costas_sequence(int prime, int primitive_root) {
    if (!is_prime(prime))
        throw PreconditionError("gen_costas: " + std::to_string(prime) + " is not prime");
    if (!is_primitive_root(primitive_root, prime))
        throw PreconditionError("gen_costas: " + std::to_string(primitive_root) +
                                " is not a primitive root modulo " + std::to_string(prime));
    std::vector<int> seq(prime - 1);
    long x = 1;
    for (int i = 1; i < prime; ++i) {
        x = (x * primitive_root) % prime;
        seq[i - 1] = static_cast<int>(x);
    }
    return seq;
}

Waveform gen_costas(int prime, int primitive_root, double base_freq, double hop_spacing,
                    double hop_duration, double sample_rate) {
    const auto seq = costas_sequence(prime, primitive_root);
    if (hop_duration <= 0.0) throw PreconditionError("gen_costas: hop_duration must be positive");
    const double nyquist = sample_rate / 2.0;
    for (int a : seq) {
        const double f = base_freq + (a - 1) * hop_spacing;
        if (f < 0.0 || f >= nyquist)
            throw PreconditionError("gen_costas: hop frequency " + std::to_string(f) +
                                    " Hz at or above Nyquist (" + std::to_string(nyquist) + " Hz)");
    }

    const int hops = prime - 1;
    const auto total = static_cast<size_t>(std::llround(hops * hop_duration * sample_rate));
    Waveform w;
    w.sample_rate = sample_rate;
    w.label = "costas";
    w.samples.resize(total);
    // Phase accumulates across hop boundaries; no resets.
    double phase = 0.0;
    const double hop_samples = hop_duration * sample_rate;
    for (size_t i = 0; i < total; ++i) {
        int h = static_cast<int>(static_cast<double>(i) / hop_samples);
        if (h > hops - 1) h = hops - 1;
        const double f = base_freq + (seq[h] - 1) * hop_spacing;
        w.samples[i] = std::sin(phase);
        phase += 2.0 * M_PI * f / sample_rate;
    }
    return w;
}

TargetScene sample_target_scene(uint64_t rng_seed) {
    Rng rng(rng_seed);
    TargetScene scene;
    const int count = 1 + static_cast<int>(rng.uniform_index(12));
    scene.scatterers.resize(count);
    for (auto& s : scene.scatterers) {
        s.cross_section = rng.uniform(0.0, 1.0);
        s.range_offset = rng.uniform(0.0, 10.0);
        s.spin_radius = rng.uniform(0.0, 1.0);
        s.spin_phase = rng.uniform(0.0, 2.0 * M_PI);
    }
    scene.radial_velocity = rng.uniform(0.0, 300.0);
    scene.rotation_rate = rng.uniform(0.0, 0.2);
    return scene;
}

Waveform synthesize_echo(const Waveform& tx, const TargetScene& scene) {
    if (!all_finite(tx.samples)) throw PreconditionError("synthesize_echo: tx not finite");
    scene.validate();

    const size_t n = tx.size();
    Waveform echo;
    echo.sample_rate = tx.sample_rate;
    echo.label = tx.label + "-echo";
    echo.samples.assign(n, 0.0);

    for (const auto& s : scene.scatterers) {
        for (size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / tx.sample_rate;
            const double range = s.range_offset + scene.radial_velocity * t +
                                 s.spin_radius * std::sin(scene.rotation_rate * t + s.spin_phase);
            const double delay_samples = 2.0 * range / kSpeedOfLight * tx.sample_rate;
            if (delay_samples == 0.0) {
                echo.samples[i] += s.cross_section * tx.samples[i];
            } else {
                echo.samples[i] += s.cross_section *
                                   sinc_interp_at(tx.samples.data(), n,
                                                  static_cast<double>(i) - delay_samples);
            }
        }
    }
    return echo;
}

} // namespace mwprec
