#pragma once

#include <string>
#include <vector>

namespace mwprec {

// A real-valued sampled signal. Amplitudes are dimensionless (normalized
// upstream of the channel), sample_rate is in Hz.
struct Waveform {
    std::vector<double> samples;
    double sample_rate = 0.0;
    std::string label;

    size_t size() const { return samples.size(); }
};

// Scales so that max |sample| == peak exactly. Rejects all-zero input.
Waveform normalize(const Waveform& w, double peak);

bool all_finite(const std::vector<double>& v);

} // namespace mwprec
