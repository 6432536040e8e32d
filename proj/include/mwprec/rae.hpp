#pragma once

// The residual autoencoder: five strided conv layers (ReLU), four
// transposed-conv layers (Tanh), and an input-to-output additive skip.
// Layer table (kernel, channels, stride, activation):
//   conv   5: 1->32 s2 | 5: 32->34 s2 | 3: 34->38 s2 | 3: 38->44 s2 | 3: 44->44 s1
//   deconv 5: 44->38 s2 | 5: 38->34 s2 | 5: 34->32 s2 | 7: 32->1 s2

#include <array>
#include <cstdint>
#include <utility>

#include "mwprec/rng.hpp"
#include "mwprec/tensor.hpp"

namespace mwprec {

inline constexpr int kRaeLayers = 9;
inline constexpr int kRaeConvLayers = 5;
inline constexpr int kRaeDownsampling = 16; // product of encoder strides
inline constexpr size_t kRaeStandardParamCount = 41081;
inline constexpr std::array<int, 5> kRaeStandardWidths = {32, 34, 38, 44, 44};

template <typename T>
struct RaeGrads {
    struct Layer {
        std::vector<T> weights;
        std::vector<T> bias;
    };
    std::array<Layer, kRaeLayers> layers;
    FeatureMap<T> grad_input; // loss grad w.r.t. the network input
};

template <typename T>
struct RaeForwardCache {
    std::array<FeatureMap<T>, kRaeLayers> layer_inputs; // input feeding layer i
    FeatureMap<T> residual;                             // final Tanh output r
    int input_length() const { return layer_inputs[0].length; }
    // encoder/decoder junction: post-ReLU output of the 5th conv row
    const FeatureMap<T>& bottleneck() const { return layer_inputs[kRaeConvLayers]; }
};

template <typename T>
class Rae {
public:
    std::array<Conv1dParams<T>, kRaeLayers> layers;

    static Rae with_widths(const std::array<int, 5>& enc) {
        Rae r;
        r.layers[0] = Conv1dParams<T>::conv(enc[0], 1, 5, 2);
        r.layers[1] = Conv1dParams<T>::conv(enc[1], enc[0], 5, 2);
        r.layers[2] = Conv1dParams<T>::conv(enc[2], enc[1], 3, 2);
        r.layers[3] = Conv1dParams<T>::conv(enc[3], enc[2], 3, 2);
        r.layers[4] = Conv1dParams<T>::conv(enc[4], enc[3], 3, 1);
        r.layers[5] = Conv1dParams<T>::deconv(enc[2], enc[4], 5, 2);
        r.layers[6] = Conv1dParams<T>::deconv(enc[1], enc[2], 5, 2);
        r.layers[7] = Conv1dParams<T>::deconv(enc[0], enc[1], 5, 2);
        r.layers[8] = Conv1dParams<T>::deconv(1, enc[0], 7, 2);
        return r;
    }

    static Rae standard() {
        Rae r = with_widths(kRaeStandardWidths);
        if (r.param_count() != kRaeStandardParamCount)
            throw NumericError("RAE construction: parameter count " +
                               std::to_string(r.param_count()) + " != expected " +
                               std::to_string(kRaeStandardParamCount));
        return r;
    }

    // width-reduced variant for the 64-bit gradient-check suite
    static Rae reduced() { return with_widths({4, 4, 4, 4, 4}); }

    size_t param_count() const {
        size_t n = 0;
        for (const auto& l : layers) n += l.param_count();
        return n;
    }

    static bool is_deconv(int layer) { return layer >= kRaeConvLayers; }

    // He-uniform on the ReLU convs, Glorot-uniform on the Tanh deconvs;
    // biases zero. Draw order is fixed (layer by layer, weights flat).
    void init_params(uint64_t seed) {
        Rng rng(seed);
        for (int i = 0; i < kRaeLayers; ++i) {
            auto& l = layers[i];
            const double fan_in = static_cast<double>(l.in_channels) * l.kernel_width;
            const double fan_out = static_cast<double>(l.out_channels) * l.kernel_width;
            const double limit = is_deconv(i) ? std::sqrt(6.0 / (fan_in + fan_out))
                                              : std::sqrt(6.0 / fan_in);
            for (auto& w : l.weights) w = static_cast<T>(rng.uniform(-limit, limit));
            for (auto& b : l.bias) b = T(0);
        }
    }
};

template <typename T>
void check_rae_input_length(int length) {
    if (length <= 0 || length % kRaeDownsampling != 0)
        throw PreconditionError("RAE input length must be a positive multiple of " +
                                std::to_string(kRaeDownsampling) + ", got " +
                                std::to_string(length));
}

template <typename T>
std::pair<FeatureMap<T>, RaeForwardCache<T>> rae_forward(const FeatureMap<T>& x,
                                                         const Rae<T>& net) {
    check_rae_input_length<T>(x.length);
    if (x.channels != net.layers[0].in_channels)
        throw PreconditionError("RAE input must have " +
                                std::to_string(net.layers[0].in_channels) + " channel(s)");

    RaeForwardCache<T> cache;
    FeatureMap<T> h = x;
    for (int i = 0; i < kRaeLayers; ++i) {
        cache.layer_inputs[i] = h;
        if (Rae<T>::is_deconv(i))
            h = tanh_act(conv1d_transpose_same(h, net.layers[i]));
        else
            h = relu(conv1d_same(h, net.layers[i]));
    }
    cache.residual = h;

    FeatureMap<T> y = x;
    for (size_t i = 0; i < y.values.size(); ++i) y.values[i] += h.values[i];
    return {std::move(y), std::move(cache)};
}

template <typename T>
RaeGrads<T> rae_backward(const RaeForwardCache<T>& cache, const Rae<T>& net,
                         const FeatureMap<T>& loss_grad) {
    if (cache.layer_inputs[0].length == 0)
        throw PreconditionError("rae_backward: empty cache");
    for (int i = 0; i < kRaeLayers; ++i)
        if (cache.layer_inputs[i].channels != net.layers[i].in_channels)
            throw PreconditionError("rae_backward: cache does not match network (layer " +
                                    std::to_string(i) + ")");
    if (loss_grad.channels != 1 || loss_grad.length != cache.input_length())
        throw PreconditionError("rae_backward: loss gradient shape mismatch");

    RaeGrads<T> grads;
    FeatureMap<T> g = loss_grad; // dL/dr: the skip contributes dL/dy unchanged
    for (int i = kRaeLayers - 1; i >= 0; --i) {
        // activation output of layer i is the next layer's input (or the residual)
        const FeatureMap<T>& act = (i + 1 < kRaeLayers) ? cache.layer_inputs[i + 1]
                                                        : cache.residual;
        ConvGrads<T> cg;
        if (Rae<T>::is_deconv(i)) {
            const FeatureMap<T> gpre = tanh_grad(act, g);
            cg = conv1d_transpose_same_grad(cache.layer_inputs[i], net.layers[i], gpre);
        } else {
            const FeatureMap<T> gpre = relu_grad(act, g); // act>0 iff pre>0
            cg = conv1d_same_grad(cache.layer_inputs[i], net.layers[i], gpre);
        }
        grads.layers[i].weights = std::move(cg.grad_w);
        grads.layers[i].bias = std::move(cg.grad_b);
        g = std::move(cg.grad_x);
    }
    grads.grad_input = loss_grad;
    for (size_t i = 0; i < g.values.size(); ++i) grads.grad_input.values[i] += g.values[i];
    return grads;
}

// Mean absolute error and its subgradient (sign(0) := 0).
template <typename T>
std::pair<double, FeatureMap<T>> mae_loss(const FeatureMap<T>& y, const FeatureMap<T>& y_ref) {
    if (y.channels != y_ref.channels || y.length != y_ref.length)
        throw PreconditionError("mae_loss: length mismatch (" + std::to_string(y.length) +
                                " vs " + std::to_string(y_ref.length) + ")");
    const double inv = 1.0 / static_cast<double>(y.values.size());
    double loss = 0.0;
    FeatureMap<T> grad(y.channels, y.length);
    for (size_t i = 0; i < y.values.size(); ++i) {
        const double diff = static_cast<double>(y.values[i]) - static_cast<double>(y_ref.values[i]);
        loss += std::fabs(diff);
        grad.values[i] = diff > 0.0 ? static_cast<T>(inv) : (diff < 0.0 ? static_cast<T>(-inv) : T(0));
    }
    return {loss * inv, std::move(grad)};
}

} // namespace mwprec
