#include "mwprec/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mwprec/errors.hpp"

namespace mwprec {

void channel_to_config(const ChannelModel& m, KeyValueConfig& cfg) {
    cfg.set("channel.preset", m.preset_name);
    cfg.set_f64("channel.nonlinearity_beta", m.nonlinearity_beta);
    cfg.set_f64_list("channel.filter_taps", m.filter_taps);
    cfg.set_u64("channel.interleave.num_channels",
                m.interleave ? static_cast<uint64_t>(m.interleave->num_channels) : 0);
    if (m.interleave) {
        cfg.set_f64_list("channel.interleave.gains", m.interleave->gains);
        cfg.set_f64_list("channel.interleave.offsets", m.interleave->offsets);
        cfg.set_f64_list("channel.interleave.skews", m.interleave->skews);
    }
}

ChannelModel channel_from_config(const KeyValueConfig& cfg) {
    ChannelModel m;
    m.preset_name = cfg.get_or("channel.preset", "custom");
    m.nonlinearity_beta = cfg.get_f64("channel.nonlinearity_beta");
    m.filter_taps = cfg.get_f64_list("channel.filter_taps");
    const uint64_t nch = cfg.has("channel.interleave.num_channels")
                             ? cfg.get_u64("channel.interleave.num_channels")
                             : 0;
    if (nch > 0) {
        InterleaveParams il;
        il.num_channels = static_cast<int>(nch);
        il.gains = cfg.get_f64_list("channel.interleave.gains");
        il.offsets = cfg.get_f64_list("channel.interleave.offsets");
        il.skews = cfg.get_f64_list("channel.interleave.skews");
        m.interleave = il;
    }
    m.validate();
    return m;
}

void acquisition_to_config(const AcquisitionConfig& a, KeyValueConfig& cfg) {
    cfg.set_f64("acquisition.noise_rms", a.noise_rms);
    cfg.set_u64("acquisition.avg_count", static_cast<uint64_t>(a.avg_count));
    cfg.set_u64("acquisition.rng_seed", a.rng_seed);
}

AcquisitionConfig acquisition_from_config(const KeyValueConfig& cfg) {
    AcquisitionConfig a;
    a.noise_rms = cfg.get_f64("acquisition.noise_rms");
    a.avg_count = static_cast<int>(cfg.get_u64("acquisition.avg_count"));
    a.rng_seed = cfg.get_u64("acquisition.rng_seed");
    a.validate();
    return a;
}

void signal_to_config(const SignalConfig& s, KeyValueConfig& cfg) {
    cfg.set("signal.category", s.category);
    cfg.set_f64("signal.sample_rate", s.sample_rate);
    cfg.set_u64("signal.record_length", s.record_length);
    cfg.set_f64("signal.peak", s.peak);
    cfg.set_f64("signal.lfm_f_start", s.lfm_f_start);
    cfg.set_f64("signal.lfm_f_stop", s.lfm_f_stop);
    cfg.set_f64("signal.amplitude", s.amplitude);
    cfg.set_i64("signal.costas_prime", s.costas_prime);
    cfg.set_i64("signal.costas_root", s.costas_root);
    cfg.set_f64("signal.costas_base_freq", s.costas_base_freq);
    cfg.set_f64("signal.costas_hop_spacing", s.costas_hop_spacing);
}

SignalConfig signal_from_config(const KeyValueConfig& cfg) {
    SignalConfig s;
    s.category = cfg.get("signal.category");
    s.sample_rate = cfg.get_f64("signal.sample_rate");
    s.record_length = static_cast<uint32_t>(cfg.get_u64("signal.record_length"));
    s.peak = cfg.get_f64("signal.peak");
    s.lfm_f_start = cfg.get_f64("signal.lfm_f_start");
    s.lfm_f_stop = cfg.get_f64("signal.lfm_f_stop");
    s.amplitude = cfg.get_f64("signal.amplitude");
    s.costas_prime = static_cast<int>(cfg.get_i64("signal.costas_prime"));
    s.costas_root = static_cast<int>(cfg.get_i64("signal.costas_root"));
    s.costas_base_freq = cfg.get_f64("signal.costas_base_freq");
    s.costas_hop_spacing = cfg.get_f64("signal.costas_hop_spacing");
    s.validate();
    return s;
}

void save_waveform_csv(const std::string& path, const std::vector<double>& samples) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << "index,amplitude\n";
    char buf[64];
    for (size_t i = 0; i < samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, samples[i]);
        os << buf;
    }
}

std::vector<double> load_waveform_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    std::vector<double> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (lineno == 1 && line.find("index") != std::string::npos) continue; // header
        const size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw FormatError("waveform CSV line " + std::to_string(lineno) +
                              " is not 'index,amplitude'");
        const std::string amp = line.substr(comma + 1);
        char* end = nullptr;
        const double v = std::strtod(amp.c_str(), &end);
        if (end == amp.c_str())
            throw FormatError("waveform CSV line " + std::to_string(lineno) +
                              " has a non-numeric amplitude");
        out.push_back(v);
    }
    if (out.empty()) throw FormatError("waveform CSV '" + path + "' has no samples");
    return out;
}

} // namespace mwprec
