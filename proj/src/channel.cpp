#include "mwprec/channel.hpp"

#include <cmath>

#include "mwprec/errors.hpp"
#include "mwprec/rng.hpp"
#include "mwprec/sinc_interp.hpp"

namespace mwprec {

void InterleaveParams::validate() const {
    if (num_channels < 1)
        throw PreconditionError("interleave: num_channels must be >= 1");
    const auto m = static_cast<size_t>(num_channels);
    if (gains.size() != m || offsets.size() != m || skews.size() != m)
        throw PreconditionError("interleave: gains/offsets/skews must each have num_channels entries");
}

void ChannelModel::validate() const {
    if (!(nonlinearity_beta > 0.0 && nonlinearity_beta <= M_PI / 2.0))
        throw PreconditionError("channel: nonlinearity_beta must be in (0, pi/2]");
    if (filter_taps.empty()) throw PreconditionError("channel: filter_taps must be nonempty");
    if (!all_finite(filter_taps)) throw PreconditionError("channel: filter_taps not finite");
    if (interleave) interleave->validate();
}

void AcquisitionConfig::validate() const {
    if (noise_rms < 0.0) throw PreconditionError("acquire: noise_rms must be >= 0");
    if (avg_count < 1) throw PreconditionError("acquire: avg_count must be >= 1");
}

Waveform apply_nonlinearity(const Waveform& w, double beta) {
    if (!(beta > 0.0 && beta <= M_PI / 2.0))
        throw PreconditionError("apply_nonlinearity: beta must be in (0, pi/2]");
    Waveform out = w;
    const double denom = std::sin(beta);
    // true division keeps the full-scale point exact: sin(beta*1)/sin(beta) == 1
    for (double& x : out.samples) x = std::sin(beta * x) / denom;
    return out;
}

Waveform apply_fir(const Waveform& w, const std::vector<double>& taps) {
    if (taps.empty()) throw PreconditionError("apply_fir: empty taps");
    Waveform out = w;
    const long n = static_cast<long>(w.size());
    const long t = static_cast<long>(taps.size());
    const long center = (t - 1) / 2;
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long k = 0; k < t; ++k) {
            const long j = i + k - center;
            if (j >= 0 && j < n) acc += taps[k] * w.samples[j];
        }
        out.samples[i] = acc;
    }
    return out;
}

Waveform apply_interleave_mismatch(const Waveform& w, const InterleaveParams& p) {
    p.validate();
    const int m = p.num_channels;
    // Sub-channel m sees the input delayed by its skew; sample n is taken
    // from channel n mod M with that channel's gain and offset.
    std::vector<std::vector<double>> delayed(m);
    for (int c = 0; c < m; ++c)
        delayed[c] = (p.skews[c] == 0.0) ? w.samples : fractional_delay(w.samples, p.skews[c]);

    Waveform out = w;
    for (size_t n = 0; n < w.size(); ++n) {
        const int c = static_cast<int>(n % static_cast<size_t>(m));
        out.samples[n] = p.gains[c] * delayed[c][n] + p.offsets[c];
    }
    return out;
}

Waveform apply_channel(const Waveform& w, const ChannelModel& model) {
    model.validate();
    Waveform out = apply_nonlinearity(w, model.nonlinearity_beta);
    out = apply_fir(out, model.filter_taps);
    if (model.interleave) out = apply_interleave_mismatch(out, *model.interleave);
    return out;
}

Waveform acquire(const Waveform& w, const AcquisitionConfig& cfg) {
    cfg.validate();
    if (cfg.noise_rms == 0.0) return w;
    Rng rng(cfg.rng_seed);
    Waveform out = w;
    std::vector<double> acc(w.size(), 0.0);
    for (int k = 0; k < cfg.avg_count; ++k)
        for (size_t i = 0; i < w.size(); ++i)
            acc[i] += w.samples[i] + cfg.noise_rms * rng.normal();
    const double inv = 1.0 / cfg.avg_count;
    for (size_t i = 0; i < w.size(); ++i) out.samples[i] = acc[i] * inv;
    return out;
}

std::vector<double> design_lowpass(int taps, double cutoff_frac) {
    if (taps < 1 || taps % 2 == 0)
        throw PreconditionError("design_lowpass: taps must be odd and positive");
    if (!(cutoff_frac > 0.0 && cutoff_frac < 1.0))
        throw PreconditionError("design_lowpass: cutoff must be in (0, 1) of Nyquist");
    std::vector<double> h(taps);
    const int center = (taps - 1) / 2;
    const double fc = cutoff_frac / 2.0; // cycles per sample
    double sum = 0.0;
    for (int i = 0; i < taps; ++i) {
        const double u = i - center;
        const double s = (u == 0.0) ? 2.0 * fc : std::sin(2.0 * M_PI * fc * u) / (M_PI * u);
        const double win = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (taps - 1));
        h[i] = s * win;
        sum += h[i];
    }
    for (double& v : h) v /= sum; // unit DC gain
    return h;
}

ChannelModel pps_like_preset() {
    ChannelModel m;
    m.nonlinearity_beta = 1.2;
    m.filter_taps = design_lowpass(31, 0.35);
    m.interleave.reset();
    m.preset_name = "pps-like";
    return m;
}

ChannelModel padc_like_preset() {
    ChannelModel m = pps_like_preset();
    InterleaveParams il;
    il.num_channels = 4;
    il.gains = {1.05, 0.95, 1.02, 0.98};
    il.offsets = {0.01, -0.01, 0.005, -0.005};
    il.skews = {0.1, -0.1, 0.05, -0.05};
    m.interleave = il;
    m.preset_name = "padc-like";
    return m;
}

ChannelModel channel_preset(const std::string& name) {
    if (name == "pps-like") return pps_like_preset();
    if (name == "padc-like") return padc_like_preset();
    throw ConfigError("unknown channel preset '" + name + "' (expected pps-like or padc-like)");
}

} // namespace mwprec
