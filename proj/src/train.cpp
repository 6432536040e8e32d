#include "mwprec/train.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "mwprec/binio.hpp"
#include "mwprec/rng.hpp"

namespace mwprec {

AdamState AdamState::zeros_like(const Rae<float>& net) {
    AdamState s;
    for (int i = 0; i < kRaeLayers; ++i) {
        s.layers[i].m_w.assign(net.layers[i].weights.size(), 0.0f);
        s.layers[i].v_w.assign(net.layers[i].weights.size(), 0.0f);
        s.layers[i].m_b.assign(net.layers[i].bias.size(), 0.0f);
        s.layers[i].v_b.assign(net.layers[i].bias.size(), 0.0f);
    }
    return s;
}

namespace {

void adam_update_span(float* theta, float* m, float* v, const float* g, size_t n,
                      const AdamHyper& h, double lr, double bc1, double bc2) {
    for (size_t i = 0; i < n; ++i) {
        const double gi = g[i];
        const double mi = h.beta1 * m[i] + (1.0 - h.beta1) * gi;
        const double vi = h.beta2 * v[i] + (1.0 - h.beta2) * gi * gi;
        m[i] = static_cast<float>(mi);
        v[i] = static_cast<float>(vi);
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        theta[i] = static_cast<float>(theta[i] - lr * mhat / (std::sqrt(vhat) + h.epsilon));
    }
}

bool span_finite(const float* p, size_t n) {
    for (size_t i = 0; i < n; ++i)
        if (!std::isfinite(p[i])) return false;
    return true;
}

} // namespace

void adam_step(Rae<float>& net, const RaeGrads<float>& grads, AdamState& state, double lr) {
    for (int i = 0; i < kRaeLayers; ++i) {
        if (grads.layers[i].weights.size() != net.layers[i].weights.size() ||
            grads.layers[i].bias.size() != net.layers[i].bias.size())
            throw PreconditionError("adam_step: gradient shapes do not match parameters");
        if (!span_finite(grads.layers[i].weights.data(), grads.layers[i].weights.size()) ||
            !span_finite(grads.layers[i].bias.data(), grads.layers[i].bias.size()))
            throw NumericError("adam_step: non-finite gradient in layer " + std::to_string(i));
    }
    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double bc1 = 1.0 - std::pow(state.hyper.beta1, t);
    const double bc2 = 1.0 - std::pow(state.hyper.beta2, t);
    for (int i = 0; i < kRaeLayers; ++i) {
        auto& l = net.layers[i];
        auto& s = state.layers[i];
        adam_update_span(l.weights.data(), s.m_w.data(), s.v_w.data(),
                         grads.layers[i].weights.data(), l.weights.size(), state.hyper, lr, bc1, bc2);
        adam_update_span(l.bias.data(), s.m_b.data(), s.v_b.data(), grads.layers[i].bias.data(),
                         l.bias.size(), state.hyper, lr, bc1, bc2);
    }
}

void TrainConfig::validate() const {
    if (total_iterations > 0 && decay_at >= total_iterations)
        throw PreconditionError("decay_at must be < total_iterations");
    if (batch_size < 1) throw PreconditionError("batch_size must be >= 1");
    if (log_every < 1) throw PreconditionError("log_every must be >= 1");
}

double lr_at(uint64_t iteration, const TrainConfig& cfg) {
    if (iteration >= cfg.total_iterations)
        throw PreconditionError("lr_at: iteration " + std::to_string(iteration) +
                                " out of range [0, " + std::to_string(cfg.total_iterations) + ")");
    return iteration < cfg.decay_at ? cfg.lr_before : cfg.lr_after;
}

namespace {

FeatureMap<float> to_feature(const std::vector<float>& v) {
    FeatureMap<float> f(1, static_cast<int>(v.size()));
    std::memcpy(f.values.data(), v.data(), v.size() * sizeof(float));
    return f;
}

// example-index-ordered sum, then scale: reduction order fixed regardless of
// how many workers computed the per-example grads
RaeGrads<float> average_grads(const std::vector<RaeGrads<float>>& per_example) {
    const double inv = 1.0 / static_cast<double>(per_example.size());
    RaeGrads<float> avg = per_example[0];
    for (int l = 0; l < kRaeLayers; ++l) {
        auto& aw = avg.layers[l].weights;
        auto& ab = avg.layers[l].bias;
        for (size_t i = 0; i < aw.size(); ++i) {
            double acc = per_example[0].layers[l].weights[i];
            for (size_t j = 1; j < per_example.size(); ++j)
                acc += per_example[j].layers[l].weights[i];
            aw[i] = static_cast<float>(acc * inv);
        }
        for (size_t i = 0; i < ab.size(); ++i) {
            double acc = per_example[0].layers[l].bias[i];
            for (size_t j = 1; j < per_example.size(); ++j)
                acc += per_example[j].layers[l].bias[i];
            ab[i] = static_cast<float>(acc * inv);
        }
    }
    return avg;
}

} // namespace

double dataset_loss(const Rae<float>& net, const Dataset& ds, size_t begin, size_t end) {
    if (begin >= end) throw PreconditionError("dataset_loss: empty range");
    std::vector<double> losses(end - begin, 0.0);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < static_cast<long>(end - begin); ++j) {
        const auto& ex = ds.examples[begin + j];
        auto [y, cache] = rae_forward(to_feature(ex.distorted), net);
        losses[j] = mae_loss(y, to_feature(ex.clean)).first;
    }
    double acc = 0.0;
    for (double l : losses) acc += l;
    return acc / static_cast<double>(losses.size());
}

LossCurves train(Rae<float>& net, const Dataset& ds, const TrainConfig& cfg,
                 AdamState* final_state) {
    cfg.validate();
    if (ds.train_count() == 0 || ds.val_count() == 0)
        throw PreconditionError("train: dataset needs nonempty train and validation splits");
    check_rae_input_length<float>(static_cast<int>(ds.waveform_length));

    LossCurves curves;
    AdamState state = AdamState::zeros_like(net);
    if (cfg.total_iterations == 0) {
        if (final_state) *final_state = state;
        return curves;
    }

    Rng batch_rng(derive_seed(cfg.master_seed, 0));

    const size_t batch = cfg.batch_size;
    std::vector<size_t> idx(batch);
    std::vector<RaeGrads<float>> grads(batch);
    std::vector<double> losses(batch);

    for (uint64_t iter = 0; iter < cfg.total_iterations; ++iter) {
        const double lr = lr_at(iter, cfg);
        for (auto& i : idx) i = batch_rng.uniform_index(ds.train_count());

#pragma omp parallel for schedule(static)
        for (long j = 0; j < static_cast<long>(batch); ++j) {
            const auto& ex = ds.examples[idx[j]];
            auto [y, cache] = rae_forward(to_feature(ex.distorted), net);
            auto [loss, lgrad] = mae_loss(y, to_feature(ex.clean));
            losses[j] = loss;
            grads[j] = rae_backward(cache, net, lgrad);
        }

        double batch_loss = 0.0;
        for (double l : losses) batch_loss += l;
        batch_loss /= static_cast<double>(batch);
        if (!std::isfinite(batch_loss)) {
            std::string which;
            for (size_t j = 0; j < batch; ++j) which += (j ? "," : "") + std::to_string(idx[j]);
            throw NumericError("train: non-finite loss at iteration " + std::to_string(iter) +
                               " (batch indices " + which + ")");
        }

        if (iter % cfg.log_every == 0) {
            curves.iteration.push_back(iter);
            curves.train_loss.push_back(batch_loss);
            curves.val_loss.push_back(
                dataset_loss(net, ds, ds.train_count(), ds.examples.size()));
        }

        const RaeGrads<float> avg = average_grads(grads);
        adam_step(net, avg, state, lr);

        if (cfg.checkpoint_every > 0 && !cfg.checkpoint_path.empty() &&
            (iter + 1) % cfg.checkpoint_every == 0 && iter + 1 < cfg.total_iterations) {
            save_checkpoint(cfg.checkpoint_path + ".iter" + std::to_string(iter + 1), net,
                            &state, iter + 1);
        }
    }

    curves.iteration.push_back(cfg.total_iterations);
    curves.train_loss.push_back(dataset_loss(net, ds, 0, ds.train_count()));
    curves.val_loss.push_back(dataset_loss(net, ds, ds.train_count(), ds.examples.size()));
    if (final_state) *final_state = state;
    return curves;
}

void save_loss_curves(const std::string& path, const LossCurves& curves) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << "iteration,train_loss,val_loss\n";
    char buf[128];
    for (size_t i = 0; i < curves.iteration.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n",
                      static_cast<unsigned long long>(curves.iteration[i]), curves.train_loss[i],
                      curves.val_loss[i]);
        os << buf;
    }
}

namespace {

void put_layer_dims(std::ostream& os, const Conv1dParams<float>& l, bool deconv) {
    const uint32_t d0 = deconv ? l.in_channels : l.out_channels;
    const uint32_t d1 = deconv ? l.out_channels : l.in_channels;
    binio::put_u32(os, d0);
    binio::put_u32(os, d1);
    binio::put_u32(os, static_cast<uint32_t>(l.kernel_width));
}

} // namespace

void save_checkpoint(const std::string& path, const Rae<float>& net, const AdamState* state,
                     uint64_t iteration) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os.write("MWPC", 4);
    binio::put_u32(os, kCheckpointVersion);
    for (int i = 0; i < kRaeLayers; ++i) {
        put_layer_dims(os, net.layers[i], Rae<float>::is_deconv(i));
        binio::put_f32_array(os, net.layers[i].weights);
        binio::put_f32_array(os, net.layers[i].bias);
    }
    binio::put_u64(os, iteration);
    binio::put_u8(os, state ? 1 : 0);
    if (state) {
        binio::put_u64(os, state->step_count);
        for (int i = 0; i < kRaeLayers; ++i) {
            binio::put_f32_array(os, state->layers[i].m_w);
            binio::put_f32_array(os, state->layers[i].m_b);
            binio::put_f32_array(os, state->layers[i].v_w);
            binio::put_f32_array(os, state->layers[i].v_b);
        }
    }
    if (!os) throw IoError("write failure on '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "MWPC", 4) != 0)
        throw FormatError("'" + path + "' is not a checkpoint file (bad magic)");
    const uint32_t version = binio::get_u32(is, "version");
    if (version != kCheckpointVersion)
        throw FormatError("checkpoint version " + std::to_string(version) +
                          " unsupported (expected " + std::to_string(kCheckpointVersion) + ")");

    // First pass: dims determine the encoder widths, then the architecture
    // is rebuilt and checked against every stored layer shape.
    std::array<int, 5> enc{};
    std::array<std::array<uint32_t, 3>, kRaeLayers> dims;
    std::array<std::vector<float>, kRaeLayers> weights, biases;
    Checkpoint ck;
    for (int i = 0; i < kRaeLayers; ++i) {
        dims[i][0] = binio::get_u32(is, "layer dims");
        dims[i][1] = binio::get_u32(is, "layer dims");
        dims[i][2] = binio::get_u32(is, "layer dims");
        if (i < kRaeConvLayers) enc[i] = static_cast<int>(dims[i][0]);
        const size_t wn = static_cast<size_t>(dims[i][0]) * dims[i][1] * dims[i][2];
        const bool deconv = Rae<float>::is_deconv(i);
        const size_t bn = deconv ? dims[i][1] : dims[i][0];
        binio::get_f32_array(is, weights[i], wn, "layer weights");
        binio::get_f32_array(is, biases[i], bn, "layer bias");
    }
    ck.net = Rae<float>::with_widths(enc);
    for (int i = 0; i < kRaeLayers; ++i) {
        auto& l = ck.net.layers[i];
        const bool deconv = Rae<float>::is_deconv(i);
        const uint32_t d0 = deconv ? l.in_channels : l.out_channels;
        const uint32_t d1 = deconv ? l.out_channels : l.in_channels;
        if (dims[i][0] != d0 || dims[i][1] != d1 ||
            dims[i][2] != static_cast<uint32_t>(l.kernel_width))
            throw FormatError("checkpoint layer " + std::to_string(i) +
                              " dims are not a valid RAE layer");
        l.weights = std::move(weights[i]);
        l.bias = std::move(biases[i]);
    }
    ck.iteration = binio::get_u64(is, "iteration");
    ck.has_adam = binio::get_u8(is, "optimizer flag") != 0;
    if (ck.has_adam) {
        ck.adam = AdamState::zeros_like(ck.net);
        ck.adam.step_count = binio::get_u64(is, "adam step count");
        for (int i = 0; i < kRaeLayers; ++i) {
            auto& s = ck.adam.layers[i];
            binio::get_f32_array(is, s.m_w, ck.net.layers[i].weights.size(), "adam m_w");
            binio::get_f32_array(is, s.m_b, ck.net.layers[i].bias.size(), "adam m_b");
            binio::get_f32_array(is, s.v_w, ck.net.layers[i].weights.size(), "adam v_w");
            binio::get_f32_array(is, s.v_b, ck.net.layers[i].bias.size(), "adam v_b");
        }
    }
    return ck;
}

} // namespace mwprec
