#include "mwprec/dataset.hpp"

#include <cstring>
#include <fstream>

#include "mwprec/errors.hpp"
#include "mwprec/rng.hpp"
#include "mwprec/binio.hpp"
#include "mwprec/signals.hpp"

namespace mwprec {

void SignalConfig::validate() const {
    if (category != "lfm" && category != "costas")
        throw ConfigError("signal category must be 'lfm' or 'costas', got '" + category + "'");
    if (record_length == 0 || record_length % 16 != 0)
        throw PreconditionError("record_length must be a positive multiple of 16");
    if (sample_rate <= 0.0) throw PreconditionError("sample_rate must be positive");
    if (!(peak > 0.0)) throw PreconditionError("peak must be positive");
}

Waveform make_transmit(const SignalConfig& cfg) {
    cfg.validate();
    if (cfg.category == "lfm") {
        const double duration = cfg.record_length / cfg.sample_rate;
        return gen_lfm(cfg.lfm_f_start, cfg.lfm_f_stop, duration, cfg.sample_rate, cfg.amplitude);
    }
    const int hops = cfg.costas_prime - 1;
    const double hop_duration = cfg.record_length / cfg.sample_rate / hops;
    return gen_costas(cfg.costas_prime, cfg.costas_root, cfg.costas_base_freq,
                      cfg.costas_hop_spacing, hop_duration, cfg.sample_rate);
}

Dataset build_dataset(const SignalConfig& sig, const ChannelModel& model,
                      const AcquisitionConfig& acq, uint32_t count, uint32_t split_train,
                      uint32_t split_val, uint64_t master_seed) {
    sig.validate();
    model.validate();
    acq.validate();
    if (split_train + split_val != count)
        throw PreconditionError("dataset split (" + std::to_string(split_train) + "," +
                                std::to_string(split_val) + ") does not sum to count " +
                                std::to_string(count));
    if (count == 0) throw PreconditionError("dataset count must be > 0");

    const Waveform tx = make_transmit(sig);
    if (tx.size() != sig.record_length)
        throw NumericError("transmit length mismatch"); // derivation guarantees equality

    Dataset ds;
    ds.waveform_length = sig.record_length;
    ds.sample_rate = sig.sample_rate;
    ds.split_train = split_train;
    ds.examples.resize(count);

    // Each example derives its own seeds, so worker count never matters.
    std::exception_ptr first_error;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(count); ++i) {
        try {
            const uint64_t scene_seed = derive_seed(master_seed, 2 * static_cast<uint64_t>(i));
            const uint64_t noise_seed = derive_seed(master_seed, 2 * static_cast<uint64_t>(i) + 1);

            // Records shorter than the 10 m range window can miss every
            // scatterer; such scenes are redrawn from the example's own
            // seed stream.
            Waveform echo;
            for (int attempt = 0;; ++attempt) {
                const TargetScene scene = sample_target_scene(
                    attempt == 0 ? scene_seed : derive_seed(scene_seed, attempt));
                echo = synthesize_echo(tx, scene);
                bool visible = false;
                for (double v : echo.samples)
                    if (v != 0.0) {
                        visible = true;
                        break;
                    }
                if (visible) break;
                if (attempt >= 64)
                    throw NumericError("no visible scene in 64 draws; record too short");
            }
            const Waveform clean = normalize(echo, sig.peak);

            AcquisitionConfig a = acq;
            a.rng_seed = noise_seed;
            const Waveform distorted = acquire(apply_channel(clean, model), a);

            auto& ex = ds.examples[i];
            ex.clean.assign(clean.samples.begin(), clean.samples.end());
            ex.distorted.assign(distorted.samples.begin(), distorted.samples.end());
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return ds;
}

void save_dataset(const std::string& path, const Dataset& ds) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os.write("MWPD", 4);
    binio::put_u32(os, kDatasetVersion);
    binio::put_u32(os, static_cast<uint32_t>(ds.examples.size()));
    binio::put_u32(os, ds.waveform_length);
    binio::put_f64(os, ds.sample_rate);
    binio::put_u32(os, ds.split_train);
    for (const auto& ex : ds.examples) {
        binio::put_f32_array(os, ex.clean);
        binio::put_f32_array(os, ex.distorted);
    }
    if (!os) throw IoError("write failure on '" + path + "'");
}

Dataset load_dataset(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "MWPD", 4) != 0)
        throw FormatError("'" + path + "' is not a dataset file (bad magic)");
    const uint32_t version = binio::get_u32(is, "version");
    if (version != kDatasetVersion)
        throw FormatError("dataset version " + std::to_string(version) + " unsupported (expected " +
                          std::to_string(kDatasetVersion) + ")");
    Dataset ds;
    const uint32_t count = binio::get_u32(is, "example_count");
    ds.waveform_length = binio::get_u32(is, "waveform_length");
    ds.sample_rate = binio::get_f64(is, "sample_rate");
    ds.split_train = binio::get_u32(is, "split_boundary");
    if (ds.split_train > count) throw FormatError("split boundary exceeds example count");
    ds.examples.resize(count);
    for (auto& ex : ds.examples) {
        binio::get_f32_array(is, ex.clean, ds.waveform_length, "clean waveform");
        binio::get_f32_array(is, ex.distorted, ds.waveform_length, "distorted waveform");
    }
    return ds;
}

} // namespace mwprec
