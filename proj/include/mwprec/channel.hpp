#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwprec/waveform.hpp"

namespace mwprec {

struct InterleaveParams {
    int num_channels = 1;
    std::vector<double> gains;   // per-channel multiplicative gain
    std::vector<double> offsets; // per-channel additive offset
    std::vector<double> skews;   // per-channel fractional-sample delay

    void validate() const;
};

// Parametric description of a defective analog link:
// memoryless sine nonlinearity -> FIR filter -> time-interleave mismatch.
struct ChannelModel {
    double nonlinearity_beta = 1.2;     // radians, (0, pi/2]
    std::vector<double> filter_taps{1.0};
    std::optional<InterleaveParams> interleave;
    std::string preset_name = "custom";

    void validate() const;
};

struct AcquisitionConfig {
    double noise_rms = 0.025; // per-shot AWGN standard deviation
    int avg_count = 128;      // shots averaged per acquisition
    uint64_t rng_seed = 0;

    void validate() const;
};

// y = sin(beta * x) / sin(beta); unit gain at full scale, compressive.
Waveform apply_nonlinearity(const Waveform& w, double beta);

// Linear convolution with "same" alignment; group delay of symmetric taps
// is compensated (center tap at floor((T-1)/2)).
Waveform apply_fir(const Waveform& w, const std::vector<double>& taps);

Waveform apply_interleave_mismatch(const Waveform& w, const InterleaveParams& p);

// Composition nonlinearity -> FIR -> interleave; no re-normalization (the
// distortion amplitude is part of the learning target).
Waveform apply_channel(const Waveform& w, const ChannelModel& model);

// K-shot averaged acquisition: (1/K) * sum_k (w + n_k), n_k ~ N(0, noise_rms^2).
Waveform acquire(const Waveform& w, const AcquisitionConfig& cfg);

// Hamming-windowed sinc low-pass; cutoff as a fraction of Nyquist; DC gain 1.
std::vector<double> design_lowpass(int taps, double cutoff_frac);

ChannelModel pps_like_preset();
ChannelModel padc_like_preset();
ChannelModel channel_preset(const std::string& name); // "pps-like" | "padc-like"

} // namespace mwprec
