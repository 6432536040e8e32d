// mwprec: radar-echo datasets through simulated defective analog links,
// residual-autoencoder training, recovery evaluation, noise sweeps and
// t-SNE feature studies. Every command writes a <output>.config sidecar
// holding its resolved settings, so artifacts are regenerable.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mwprec/analysis.hpp"
#include "mwprec/config.hpp"
#include "mwprec/dataset.hpp"
#include "mwprec/errors.hpp"
#include "mwprec/eval.hpp"
#include "mwprec/kernels.hpp"
#include "mwprec/rae.hpp"
#include "mwprec/serialize.hpp"
#include "mwprec/train.hpp"

namespace {

using namespace mwprec;

std::string g_kernels = "auto";

void sidecar_preamble(KeyValueConfig& cfg, const std::string& command) {
    cfg.set("tool.version", kToolVersion);
    cfg.set("tool.command", command);
    cfg.set("tool.kernels", g_kernels);
}

void write_sidecar(const std::string& artifact_path, const KeyValueConfig& cfg) {
    cfg.save(artifact_path + ".config");
}

std::pair<uint32_t, uint32_t> parse_split(const std::string& s, uint32_t count) {
    const size_t comma = s.find(',');
    if (comma == std::string::npos)
        throw ConfigError("--split must be 'train,val', got '" + s + "'");
    const uint32_t t = static_cast<uint32_t>(std::stoul(s.substr(0, comma)));
    const uint32_t v = static_cast<uint32_t>(std::stoul(s.substr(comma + 1)));
    if (t + v != count)
        throw ConfigError("split " + s + " does not sum to --count " + std::to_string(count));
    return {t, v};
}

struct GenDataArgs {
    std::string category = "lfm";
    std::string channel = "pps-like";
    uint32_t count = 250;
    std::string split = "200,50";
    uint64_t seed = 1;
    std::string out;
    uint32_t length = 4096;
    double sample_rate = 20e9;
    double noise_rms = 0.025;
    int avg = 128;
    std::string config_path;
};

int cmd_gen_data(const GenDataArgs& a) {
    SignalConfig sig;
    ChannelModel model = channel_preset("pps-like");
    AcquisitionConfig acq;
    uint32_t count = a.count;
    uint64_t seed = a.seed;
    std::string split = a.split;

    if (!a.config_path.empty()) {
        const auto base = KeyValueConfig::load(a.config_path);
        sig = signal_from_config(base);
        model = channel_from_config(base);
        acq = acquisition_from_config(base);
        if (base.has("dataset.count")) count = static_cast<uint32_t>(base.get_u64("dataset.count"));
        if (base.has("dataset.master_seed")) seed = base.get_u64("dataset.master_seed");
        if (base.has("dataset.split_train"))
            split = base.get("dataset.split_train") + "," + base.get("dataset.split_val");
    } else {
        sig.category = a.category;
        sig.record_length = a.length;
        sig.sample_rate = a.sample_rate;
        acq.noise_rms = a.noise_rms;
        acq.avg_count = a.avg;
        if (a.channel == "pps-like" || a.channel == "padc-like")
            model = channel_preset(a.channel);
        else
            model = channel_from_config(KeyValueConfig::load(a.channel));
    }

    const auto [split_train, split_val] = parse_split(split, count);
    const Dataset ds = build_dataset(sig, model, acq, count, split_train, split_val, seed);
    save_dataset(a.out, ds);

    KeyValueConfig side;
    sidecar_preamble(side, "gen-data");
    signal_to_config(sig, side);
    channel_to_config(model, side);
    acquisition_to_config(acq, side);
    side.set_u64("dataset.count", count);
    side.set_u64("dataset.split_train", split_train);
    side.set_u64("dataset.split_val", split_val);
    side.set_u64("dataset.master_seed", seed);
    side.set("dataset.path", a.out);
    write_sidecar(a.out, side);

    std::printf("wrote %u examples (%u train, %u val) to %s\n", count, split_train, split_val,
                a.out.c_str());
    return 0;
}

struct TrainArgs {
    std::string data;
    std::string out;
    uint64_t iterations = 20000;
    uint64_t decay_at = 18000;
    double lr = 1e-3;
    double lr_after = 1e-4;
    uint32_t batch = 8;
    uint64_t seed = 1;
    uint64_t log_every = 100;
    uint64_t checkpoint_every = 0;
    std::string curves;
};

int cmd_train(const TrainArgs& a) {
    const Dataset ds = load_dataset(a.data);

    TrainConfig cfg;
    cfg.total_iterations = a.iterations;
    cfg.decay_at = a.decay_at;
    cfg.lr_before = a.lr;
    cfg.lr_after = a.lr_after;
    cfg.batch_size = a.batch;
    cfg.master_seed = a.seed;
    cfg.log_every = a.log_every;
    cfg.checkpoint_every = a.checkpoint_every;
    cfg.checkpoint_path = a.out;

    Rae<float> net = Rae<float>::standard();
    net.init_params(derive_seed(a.seed, 0xA11CE));
    AdamState final_state = AdamState::zeros_like(net);
    const LossCurves curves = train(net, ds, cfg, &final_state);

    save_checkpoint(a.out, net, &final_state, cfg.total_iterations);

    const std::string curves_path = a.curves.empty() ? a.out + ".curves.csv" : a.curves;
    save_loss_curves(curves_path, curves);

    KeyValueConfig side;
    sidecar_preamble(side, "train");
    side.set("train.data", a.data);
    side.set_u64("train.total_iterations", cfg.total_iterations);
    side.set_u64("train.decay_at", cfg.decay_at);
    side.set_f64("train.lr_before", cfg.lr_before);
    side.set_f64("train.lr_after", cfg.lr_after);
    side.set_u64("train.batch_size", cfg.batch_size);
    side.set_u64("train.master_seed", cfg.master_seed);
    side.set_u64("train.log_every", cfg.log_every);
    side.set_u64("train.checkpoint_every", cfg.checkpoint_every);
    side.set("train.curves", curves_path);
    if (!curves.val_loss.empty()) {
        side.set_f64("train.final_train_loss", curves.train_loss.back());
        side.set_f64("train.final_val_loss", curves.val_loss.back());
    }
    write_sidecar(a.out, side);

    if (!curves.val_loss.empty())
        std::printf("final losses: train=%.6g val=%.6g\n", curves.train_loss.back(),
                    curves.val_loss.back());
    return 0;
}

int cmd_infer(const std::string& ckpt, const std::string& in, const std::string& out) {
    const Checkpoint ck = load_checkpoint(ckpt);
    const std::vector<double> wave = load_waveform_csv(in);
    check_rae_input_length<float>(static_cast<int>(wave.size()));

    FeatureMap<float> x(1, static_cast<int>(wave.size()));
    for (size_t i = 0; i < wave.size(); ++i) x.values[i] = static_cast<float>(wave[i]);
    auto [y, cache] = rae_forward(x, ck.net);

    std::vector<double> rec(y.values.begin(), y.values.end());
    save_waveform_csv(out, rec);

    KeyValueConfig side;
    sidecar_preamble(side, "infer");
    side.set("infer.ckpt", ckpt);
    side.set("infer.in", in);
    side.set_u64("infer.length", wave.size());
    write_sidecar(out, side);
    return 0;
}

struct EvalArgs {
    std::string ckpt;
    std::string data;
    std::string report;
    std::string split = "val";
    long spectrogram_index = -1;
    std::string spectrogram_prefix = "spectrogram";
    int stft_window = 256;
    int stft_hop = 64;
};

int cmd_evaluate(const EvalArgs& a) {
    const Checkpoint ck = load_checkpoint(a.ckpt);
    const Dataset ds = load_dataset(a.data);

    size_t begin = 0, end = ds.examples.size();
    if (a.split == "val")
        begin = ds.train_count();
    else if (a.split == "train")
        end = ds.train_count();
    else if (a.split != "all")
        throw ConfigError("--split must be val, train or all");

    RecoveryReport rep = evaluate(ck.net, ds, begin, end);
    rep.dataset_id = a.data;
    save_report_csv(a.report, rep);

    if (a.spectrogram_index >= 0) {
        const size_t idx = static_cast<size_t>(a.spectrogram_index);
        if (idx >= ds.examples.size())
            throw PreconditionError("--spectrogram index out of range");
        const auto& ex = ds.examples[idx];
        auto wave = [&](const std::vector<float>& v) {
            Waveform w;
            w.sample_rate = ds.sample_rate;
            w.samples.assign(v.begin(), v.end());
            return w;
        };
        FeatureMap<float> x(1, static_cast<int>(ex.distorted.size()));
        for (size_t i = 0; i < ex.distorted.size(); ++i) x.values[i] = ex.distorted[i];
        auto [y, cache] = rae_forward(x, ck.net);
        Waveform recovered;
        recovered.sample_rate = ds.sample_rate;
        recovered.samples.assign(y.values.begin(), y.values.end());

        save_spectrogram_csv(a.spectrogram_prefix + ".clean.csv",
                             stft(wave(ex.clean), a.stft_window, a.stft_hop));
        save_spectrogram_csv(a.spectrogram_prefix + ".distorted.csv",
                             stft(wave(ex.distorted), a.stft_window, a.stft_hop));
        save_spectrogram_csv(a.spectrogram_prefix + ".recovered.csv",
                             stft(recovered, a.stft_window, a.stft_hop));
    }

    KeyValueConfig side;
    sidecar_preamble(side, "evaluate");
    side.set("evaluate.ckpt", a.ckpt);
    side.set("evaluate.data", a.data);
    side.set("evaluate.split", a.split);
    side.set_f64("evaluate.mean_mse_before", rep.mean_mse_before);
    side.set_f64("evaluate.mean_mse_after", rep.mean_mse_after);
    side.set("evaluate.mean_improvement_db",
             rep.mean_improvement_db ? std::to_string(*rep.mean_improvement_db)
                                     : std::string("unbounded"));
    write_sidecar(a.report, side);

    std::printf("examples=%zu mean_mse_before=%.6g mean_mse_after=%.6g improvement_db=%s\n",
                rep.rows.size(), rep.mean_mse_before, rep.mean_mse_after,
                rep.mean_improvement_db ? std::to_string(*rep.mean_improvement_db).c_str()
                                        : "unbounded");
    return 0;
}

struct SweepArgs {
    std::string ckpt;
    std::string data;
    std::string out;
    std::string data_config; // defaults to <data>.config
    std::string levels;
    std::string avg_counts = "128,64,32,16,8,4,1";
    uint64_t seed = 99;
};

int cmd_noise_sweep(const SweepArgs& a) {
    const Checkpoint ck = load_checkpoint(a.ckpt);
    const Dataset ds = load_dataset(a.data);
    const std::string cfg_path = a.data_config.empty() ? a.data + ".config" : a.data_config;
    const auto gen_cfg = KeyValueConfig::load(cfg_path);
    const ChannelModel model = channel_from_config(gen_cfg);
    const AcquisitionConfig acq = acquisition_from_config(gen_cfg);

    SweepConfig sweep;
    sweep.rng_seed = a.seed;
    if (!a.levels.empty()) {
        KeyValueConfig tmp;
        tmp.set("levels", a.levels);
        sweep.awgn_levels = tmp.get_f64_list("levels");
    }
    {
        KeyValueConfig tmp;
        tmp.set("avg", a.avg_counts);
        sweep.avg_counts.clear();
        for (double v : tmp.get_f64_list("avg")) sweep.avg_counts.push_back(static_cast<int>(v));
    }

    const auto points = noise_sweep(ck.net, ds, model, acq.noise_rms, sweep);
    save_sweep_csv(a.out, points);

    KeyValueConfig side;
    sidecar_preamble(side, "noise-sweep");
    side.set("sweep.ckpt", a.ckpt);
    side.set("sweep.data", a.data);
    side.set("sweep.data_config", cfg_path);
    side.set_u64("sweep.seed", a.seed);
    side.set("sweep.avg_counts", a.avg_counts);
    if (!a.levels.empty()) side.set("sweep.awgn_levels", a.levels);
    write_sidecar(a.out, side);

    std::printf("wrote %zu sweep points to %s\n", points.size(), a.out.c_str());
    return 0;
}

struct TsneArgs {
    std::string ckpt;
    std::string data;
    std::string out;
    uint64_t points = 2000;
    double perplexity = 30.0;
    int iterations = 1000;
    uint64_t seed = 7;
};

int cmd_tsne(const TsneArgs& a) {
    const Checkpoint ck = load_checkpoint(a.ckpt);
    const Dataset ds = load_dataset(a.data);

    TsneConfig cfg;
    cfg.perplexity = a.perplexity;
    cfg.iterations = a.iterations;
    cfg.seed = a.seed;
    const DependencyStudy study = dependency_study(ck.net, ds, a.points, cfg);
    save_embedding_csv(a.out, study);

    KeyValueConfig side;
    sidecar_preamble(side, "tsne");
    side.set("tsne.ckpt", a.ckpt);
    side.set("tsne.data", a.data);
    side.set_u64("tsne.points", study.points.size());
    side.set_f64("tsne.perplexity", a.perplexity);
    side.set_i64("tsne.iterations", a.iterations);
    side.set_u64("tsne.seed", a.seed);
    side.set_f64("tsne.freq_dependency_score", study.freq_score);
    side.set_f64("tsne.amp_dependency_score", study.amp_score);
    side.set_f64("tsne.final_kl", study.embedding.final_kl);
    write_sidecar(a.out, side);

    std::printf("points=%zu freq_score=%.4f amp_score=%.4f kl=%.4f\n", study.points.size(),
                study.freq_score, study.amp_score, study.embedding.final_kl);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"broadband signal recovery for defective analog links"};
    app.require_subcommand(1);
    app.add_option("--kernels", g_kernels, "kernel backend: auto|scalar|avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    GenDataArgs gd;
    auto* gen = app.add_subcommand("gen-data", "synthesize a clean/distorted dataset");
    gen->add_option("--category", gd.category)->check(CLI::IsMember({"lfm", "costas"}));
    gen->add_option("--channel", gd.channel, "pps-like, padc-like, or a channel config file");
    gen->add_option("--count", gd.count);
    gen->add_option("--split", gd.split, "train,val counts");
    gen->add_option("--seed", gd.seed);
    gen->add_option("--out", gd.out)->required();
    gen->add_option("--length", gd.length);
    gen->add_option("--sample-rate", gd.sample_rate);
    gen->add_option("--noise-rms", gd.noise_rms);
    gen->add_option("--avg", gd.avg);
    gen->add_option("--config", gd.config_path, "base config file (flags ignored when set)");

    TrainArgs ta;
    auto* tr = app.add_subcommand("train", "train the residual autoencoder");
    tr->add_option("--data", ta.data)->required();
    tr->add_option("--out", ta.out)->required();
    tr->add_option("--iterations", ta.iterations);
    tr->add_option("--decay-at", ta.decay_at);
    tr->add_option("--lr", ta.lr);
    tr->add_option("--lr-after", ta.lr_after);
    tr->add_option("--batch", ta.batch);
    tr->add_option("--seed", ta.seed);
    tr->add_option("--log-every", ta.log_every);
    tr->add_option("--checkpoint-every", ta.checkpoint_every);
    tr->add_option("--curves", ta.curves);

    std::string in_ckpt, in_path, out_path;
    auto* inf = app.add_subcommand("infer", "recover a waveform CSV with a trained checkpoint");
    inf->add_option("--ckpt", in_ckpt)->required();
    inf->add_option("--in", in_path)->required();
    inf->add_option("--out", out_path)->required();

    EvalArgs ea;
    auto* ev = app.add_subcommand("evaluate", "MSE before/after recovery over a dataset split");
    ev->add_option("--ckpt", ea.ckpt)->required();
    ev->add_option("--data", ea.data)->required();
    ev->add_option("--report", ea.report)->required();
    ev->add_option("--split", ea.split)->check(CLI::IsMember({"val", "train", "all"}));
    ev->add_option("--spectrogram", ea.spectrogram_index,
                   "also write spectrogram CSVs for this example index");
    ev->add_option("--spectrogram-prefix", ea.spectrogram_prefix);
    ev->add_option("--stft-window", ea.stft_window);
    ev->add_option("--stft-hop", ea.stft_hop);

    SweepArgs sa;
    auto* sw =
        app.add_subcommand("noise-sweep", "noise robustness: AWGN levels and averaging counts");
    sw->add_option("--ckpt", sa.ckpt)->required();
    sw->add_option("--data", sa.data)->required();
    sw->add_option("--out", sa.out)->required();
    sw->add_option("--data-config", sa.data_config, "dataset sidecar (default <data>.config)");
    sw->add_option("--levels", sa.levels, "comma-separated AWGN rms levels");
    sw->add_option("--avg-counts", sa.avg_counts);
    sw->add_option("--seed", sa.seed);

    TsneArgs tsa;
    auto* ts = app.add_subcommand("tsne", "bottleneck feature embedding and dependency scores");
    ts->add_option("--ckpt", tsa.ckpt)->required();
    ts->add_option("--data", tsa.data)->required();
    ts->add_option("--out", tsa.out)->required();
    ts->add_option("--points", tsa.points);
    ts->add_option("--perplexity", tsa.perplexity);
    ts->add_option("--iterations", tsa.iterations);
    ts->add_option("--seed", tsa.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        mwprec::kernels::set_backend(mwprec::kernels::parse_backend(g_kernels));
        if (gen->parsed()) return cmd_gen_data(gd);
        if (tr->parsed()) return cmd_train(ta);
        if (inf->parsed()) return cmd_infer(in_ckpt, in_path, out_path);
        if (ev->parsed()) return cmd_evaluate(ea);
        if (sw->parsed()) return cmd_noise_sweep(sa);
        if (ts->parsed()) return cmd_tsne(tsa);
    } catch (const mwprec::Error& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.category().c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
    return 0;
}
