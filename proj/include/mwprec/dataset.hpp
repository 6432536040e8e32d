#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwprec/channel.hpp"
#include "mwprec/waveform.hpp"

namespace mwprec {

// Transmit-waveform parameterization for dataset generation. Record length
// must be a multiple of 16 (the network downsamples by 16).
struct SignalConfig {
    std::string category = "lfm"; // "lfm" | "costas"
    double sample_rate = 20e9;
    uint32_t record_length = 4096;
    double peak = 0.9; // pre-channel normalization target

    double lfm_f_start = 0.0;
    double lfm_f_stop = 3e9;
    double amplitude = 1.0;

    int costas_prime = 11;
    int costas_root = 2;
    double costas_base_freq = 5e8;
    double costas_hop_spacing = 3.5e8;

    void validate() const;
};

Waveform make_transmit(const SignalConfig& cfg);

struct Example {
    std::vector<float> clean;     // ground truth y (pre-channel, normalized)
    std::vector<float> distorted; // y~ = acquire(channel(clean))
};

struct Dataset {
    uint32_t waveform_length = 0;
    double sample_rate = 0.0;
    uint32_t split_train = 0; // examples [0, split_train) train, rest validation
    std::vector<Example> examples;

    size_t train_count() const { return split_train; }
    size_t val_count() const { return examples.size() - split_train; }
};

Dataset build_dataset(const SignalConfig& sig, const ChannelModel& model,
                      const AcquisitionConfig& acq, uint32_t count, uint32_t split_train,
                      uint32_t split_val, uint64_t master_seed);

// Binary dataset file, little-endian:
//   "MWPD" | version u32 | example_count u32 | waveform_length u32
//   | sample_rate f64 | split_boundary u32
//   | per example: clean then distorted, waveform_length f32 each
void save_dataset(const std::string& path, const Dataset& ds);
Dataset load_dataset(const std::string& path);

inline constexpr uint32_t kDatasetVersion = 1;

} // namespace mwprec
