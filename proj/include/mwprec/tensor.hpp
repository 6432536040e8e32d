#pragma once

// 1D tensor ops under the RAE: strided "SAME" conv, its exact adjoint
// (transposed conv), elementwise activations, and their analytic gradients.
// Templated on the storage scalar: float runs through the dispatched
// kernels, double through the reference kernels (used by gradient checks).

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "mwprec/errors.hpp"
#include "mwprec/kernels.hpp"
#include "mwprec/kernels_ref.hpp"

namespace mwprec {

template <typename T>
struct FeatureMap {
    int channels = 0;
    int length = 0;
    std::vector<T> values; // row-major by channel: values[c * length + t]

    FeatureMap() = default;
    FeatureMap(int ch, int len) : channels(ch), length(len), values(static_cast<size_t>(ch) * len, T(0)) {}

    T* row(int c) { return values.data() + static_cast<size_t>(c) * length; }
    const T* row(int c) const { return values.data() + static_cast<size_t>(c) * length; }
    size_t size() const { return values.size(); }
};

// One conv/deconv layer's learnables. For conv1d_same the weight layout is
// weights[out][in][k]; for conv1d_transpose_same the same storage reads as
// weights[in][out][k] (in -> out orientation), which makes the transpose the
// exact adjoint of a conv sharing the weight array. Bias always has
// out_channels entries (the op's output channels).
template <typename T>
struct Conv1dParams {
    int out_channels = 0;
    int in_channels = 0;
    int kernel_width = 0;
    int stride = 1;
    std::vector<T> weights;
    std::vector<T> bias;

    static Conv1dParams conv(int out_ch, int in_ch, int kernel, int stride) {
        Conv1dParams p;
        p.out_channels = out_ch;
        p.in_channels = in_ch;
        p.kernel_width = kernel;
        p.stride = stride;
        p.weights.assign(static_cast<size_t>(out_ch) * in_ch * kernel, T(0));
        p.bias.assign(out_ch, T(0));
        return p;
    }
    // identical shape rules; kept separate for call-site clarity
    static Conv1dParams deconv(int out_ch, int in_ch, int kernel, int stride) {
        Conv1dParams p = conv(out_ch, in_ch, kernel, stride);
        p.weights.assign(static_cast<size_t>(in_ch) * out_ch * kernel, T(0));
        return p;
    }

    size_t weight_count() const { return weights.size(); }
    size_t param_count() const { return weights.size() + bias.size(); }
};

namespace detail {

template <typename T>
void run_conv_fwd(const T* x, const T* w, const T* bias, T* y, const kernels::ConvDims& d) {
    if constexpr (std::is_same_v<T, float>)
        kernels::active().fwd(x, w, bias, y, d);
    else
        kernels::conv_fwd_ref(x, w, bias, y, d);
}

template <typename T>
void run_conv_adj(const T* y, const T* w, const T* bias, T* z, const kernels::ConvDims& d) {
    if constexpr (std::is_same_v<T, float>)
        kernels::active().adj(y, w, bias, z, d);
    else
        kernels::conv_adj_ref(y, w, bias, z, d);
}

template <typename T>
void run_conv_wgrad(const T* x, const T* g, T* dw, const kernels::ConvDims& d) {
    if constexpr (std::is_same_v<T, float>)
        kernels::active().wgrad(x, g, dw, d);
    else
        kernels::conv_wgrad_ref(x, g, dw, d);
}

} // namespace detail

// ---- forward ----

template <typename T>
FeatureMap<T> conv1d_same(const FeatureMap<T>& x, const Conv1dParams<T>& p) {
    if (p.in_channels != x.channels)
        throw PreconditionError("conv1d_same: input has " + std::to_string(x.channels) +
                                " channels, layer expects " + std::to_string(p.in_channels));
    const auto d = kernels::make_conv_dims(p.in_channels, p.out_channels, p.kernel_width,
                                           p.stride, x.length);
    FeatureMap<T> y(p.out_channels, d.out_len);
    detail::run_conv_fwd(x.values.data(), p.weights.data(), p.bias.data(), y.values.data(), d);
    return y;
}

// Exact adjoint of conv1d_same over the shared weight array; out_length is
// x.length * stride. Bias is added per output channel after the scatter.
template <typename T>
FeatureMap<T> conv1d_transpose_same(const FeatureMap<T>& x, const Conv1dParams<T>& p) {
    if (p.in_channels != x.channels)
        throw PreconditionError("conv1d_transpose_same: input has " + std::to_string(x.channels) +
                                " channels, layer expects " + std::to_string(p.in_channels));
    const int out_len = x.length * p.stride;
    // dims of the conv being adjointed: out_channels -> in_channels
    const auto d = kernels::make_conv_dims(p.out_channels, p.in_channels, p.kernel_width,
                                           p.stride, out_len);
    FeatureMap<T> y(p.out_channels, out_len);
    detail::run_conv_adj(x.values.data(), p.weights.data(), p.bias.data(), y.values.data(), d);
    return y;
}

template <typename T>
FeatureMap<T> relu(const FeatureMap<T>& x) {
    FeatureMap<T> y = x;
    for (auto& v : y.values) v = v > T(0) ? v : T(0);
    return y;
}

template <typename T>
FeatureMap<T> tanh_act(const FeatureMap<T>& x) {
    FeatureMap<T> y = x;
    for (auto& v : y.values) v = std::tanh(v);
    return y;
}

// ---- backward ----

template <typename T>
struct ConvGrads {
    FeatureMap<T> grad_x;
    std::vector<T> grad_w;
    std::vector<T> grad_b;
};

template <typename T>
void check_upstream(const FeatureMap<T>& up, int channels, int length, const char* op) {
    if (up.channels != channels || up.length != length)
        throw PreconditionError(std::string(op) + ": upstream gradient shape (" +
                                std::to_string(up.channels) + "x" + std::to_string(up.length) +
                                ") does not match output shape (" + std::to_string(channels) +
                                "x" + std::to_string(length) + ")");
}

// per-output-channel sum of upstream over time
template <typename T>
std::vector<T> bias_grad(const FeatureMap<T>& upstream) {
    std::vector<T> gb(upstream.channels);
    for (int c = 0; c < upstream.channels; ++c) {
        double acc = 0.0;
        const T* r = upstream.row(c);
        for (int t = 0; t < upstream.length; ++t) acc += static_cast<double>(r[t]);
        gb[c] = static_cast<T>(acc);
    }
    return gb;
}

template <typename T>
ConvGrads<T> conv1d_same_grad(const FeatureMap<T>& x, const Conv1dParams<T>& p,
                              const FeatureMap<T>& upstream) {
    if (p.in_channels != x.channels)
        throw PreconditionError("conv1d_same_grad: channel mismatch");
    const auto d = kernels::make_conv_dims(p.in_channels, p.out_channels, p.kernel_width,
                                           p.stride, x.length);
    check_upstream(upstream, p.out_channels, d.out_len, "conv1d_same_grad");

    ConvGrads<T> g;
    g.grad_x = FeatureMap<T>(x.channels, x.length);
    detail::run_conv_adj(upstream.values.data(), p.weights.data(), static_cast<const T*>(nullptr),
                         g.grad_x.values.data(), d);
    g.grad_w.assign(p.weights.size(), T(0));
    detail::run_conv_wgrad(x.values.data(), upstream.values.data(), g.grad_w.data(), d);
    g.grad_b = bias_grad(upstream);
    return g;
}

template <typename T>
ConvGrads<T> conv1d_transpose_same_grad(const FeatureMap<T>& x, const Conv1dParams<T>& p,
                                        const FeatureMap<T>& upstream) {
    if (p.in_channels != x.channels)
        throw PreconditionError("conv1d_transpose_same_grad: channel mismatch");
    const int out_len = x.length * p.stride;
    const auto d = kernels::make_conv_dims(p.out_channels, p.in_channels, p.kernel_width,
                                           p.stride, out_len);
    check_upstream(upstream, p.out_channels, out_len, "conv1d_transpose_same_grad");

    ConvGrads<T> g;
    // d/dx of the adjoint is the forward conv with the same weights
    g.grad_x = FeatureMap<T>(x.channels, x.length);
    detail::run_conv_fwd(upstream.values.data(), p.weights.data(), static_cast<const T*>(nullptr),
                         g.grad_x.values.data(), d);
    // weight grad has the roles of signal and upstream swapped
    g.grad_w.assign(p.weights.size(), T(0));
    detail::run_conv_wgrad(upstream.values.data(), x.values.data(), g.grad_w.data(), d);
    g.grad_b = bias_grad(upstream);
    return g;
}

// subgradient at 0 is 0: mask on pre-activation > 0
template <typename T>
FeatureMap<T> relu_grad(const FeatureMap<T>& pre, const FeatureMap<T>& upstream) {
    check_upstream(upstream, pre.channels, pre.length, "relu_grad");
    FeatureMap<T> g = upstream;
    for (size_t i = 0; i < g.values.size(); ++i)
        if (!(pre.values[i] > T(0))) g.values[i] = T(0);
    return g;
}

// takes the tanh *output* (1 - y^2 form)
template <typename T>
FeatureMap<T> tanh_grad(const FeatureMap<T>& post, const FeatureMap<T>& upstream) {
    check_upstream(upstream, post.channels, post.length, "tanh_grad");
    FeatureMap<T> g = upstream;
    for (size_t i = 0; i < g.values.size(); ++i)
        g.values[i] = upstream.values[i] * (T(1) - post.values[i] * post.values[i]);
    return g;
}

} // namespace mwprec
