#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwprec/channel.hpp"
#include "mwprec/dataset.hpp"
#include "mwprec/rae.hpp"

namespace mwprec {

double mse(const std::vector<float>& a, const std::vector<float>& b);
double mse(const std::vector<double>& a, const std::vector<double>& b);

// 10*log10(before/after); nullopt marks the unbounded sentinel (after == 0).
std::optional<double> improvement_db(double mse_before, double mse_after);

// Hann-windowed DFT magnitudes, frames x (window_len/2 + 1) bins.
struct Spectrogram {
    int window_len = 0;
    int hop = 0;
    double sample_rate = 0.0;
    std::vector<std::vector<double>> frames; // magnitude per frame

    size_t bins() const { return frames.empty() ? 0 : frames[0].size(); }
};

Spectrogram stft(const Waveform& w, int window_len, int hop);
void save_spectrogram_csv(const std::string& path, const Spectrogram& s);

struct RecoveryReport {
    struct Row {
        size_t index;
        double mse_before;
        double mse_after;
        std::optional<double> improvement_db;
    };
    std::vector<Row> rows;
    double mean_mse_before = 0.0;
    double mean_mse_after = 0.0;
    // mean improvement of the aggregate MSEs; unset when any after-MSE is 0
    std::optional<double> mean_improvement_db;
    std::string dataset_id;
    std::string channel_id;
};

// mse_before = mse(distorted, clean); mse_after = mse(rae(distorted), clean)
RecoveryReport evaluate(const Rae<float>& net, const Dataset& ds, size_t begin, size_t end);
RecoveryReport evaluate_validation(const Rae<float>& net, const Dataset& ds);
void save_report_csv(const std::string& path, const RecoveryReport& report);

struct SweepPoint {
    std::string noise_kind; // "awgn" | "avg"
    double level;           // AWGN rms, or the averaging count
    double mse_before;
    double mse_after;
};

struct SweepConfig {
    std::vector<double> awgn_levels;          // default: 10 log steps 1e-3..0.3
    std::vector<int> avg_counts = {128, 64, 32, 16, 8, 4, 1};
    uint64_t rng_seed = 99;
};

std::vector<double> default_awgn_levels();

// Noise-robustness protocol: (a) synthetic AWGN on the stored distorted
// inputs, (b) re-acquired datasets at each averaging count. (b) re-runs the
// channel on the stored clean waveforms with fresh acquisition noise at the
// channel's native per-shot rms.
std::vector<SweepPoint> noise_sweep(const Rae<float>& net, const Dataset& ds,
                                    const ChannelModel& model, double native_noise_rms,
                                    const SweepConfig& sweep);

void save_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points);

} // namespace mwprec
