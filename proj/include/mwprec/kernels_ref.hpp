#pragma once

// Reference conv kernels, templated on the storage scalar. The float
// instantiation is the scalar dispatch backend; the double instantiation
// backs the 64-bit gradient-check path. Accumulation is always double.

#include <vector>

#include "mwprec/kernels.hpp"

namespace mwprec::kernels {

template <typename T>
void pad_input(const T* x, const ConvDims& d, std::vector<T>& xp) {
    const int padded = d.in_len + d.pad_total;
    xp.assign(static_cast<size_t>(d.in_ch) * padded, T(0));
    for (int a = 0; a < d.in_ch; ++a) {
        T* row = xp.data() + static_cast<size_t>(a) * padded + d.pad_left;
        const T* src = x + static_cast<size_t>(a) * d.in_len;
        for (int i = 0; i < d.in_len; ++i) row[i] = src[i];
    }
}

template <typename T>
void conv_fwd_ref(const T* x, const T* w, const T* bias, T* y, const ConvDims& d) {
    thread_local std::vector<T> xp;
    pad_input(x, d, xp);
    const int padded = d.in_len + d.pad_total;
    for (int b = 0; b < d.out_ch; ++b) {
        const double bv = bias ? static_cast<double>(bias[b]) : 0.0;
        for (int t = 0; t < d.out_len; ++t) {
            double acc = bv;
            for (int a = 0; a < d.in_ch; ++a) {
                const T* xr = xp.data() + static_cast<size_t>(a) * padded + t * d.stride;
                const T* wr = w + (static_cast<size_t>(b) * d.in_ch + a) * d.kernel;
                for (int k = 0; k < d.kernel; ++k)
                    acc += static_cast<double>(wr[k]) * static_cast<double>(xr[k]);
            }
            y[static_cast<size_t>(b) * d.out_len + t] = static_cast<T>(acc);
        }
    }
}

template <typename T>
void conv_adj_ref(const T* y, const T* w, const T* bias, T* z, const ConvDims& d) {
    for (int a = 0; a < d.in_ch; ++a) {
        for (int u = 0; u < d.in_len; ++u) {
            double acc = bias ? static_cast<double>(bias[a]) : 0.0;
            for (int k = 0; k < d.kernel; ++k) {
                const int num = u + d.pad_left - k;
                if (num < 0 || num % d.stride != 0) continue;
                const int t = num / d.stride;
                if (t >= d.out_len) continue;
                for (int b = 0; b < d.out_ch; ++b)
                    acc += static_cast<double>(w[(static_cast<size_t>(b) * d.in_ch + a) * d.kernel + k]) *
                           static_cast<double>(y[static_cast<size_t>(b) * d.out_len + t]);
            }
            z[static_cast<size_t>(a) * d.in_len + u] = static_cast<T>(acc);
        }
    }
}

template <typename T>
void conv_wgrad_ref(const T* x, const T* g, T* dw, const ConvDims& d) {
    thread_local std::vector<T> xp;
    pad_input(x, d, xp);
    const int padded = d.in_len + d.pad_total;
    for (int b = 0; b < d.out_ch; ++b) {
        const T* gr = g + static_cast<size_t>(b) * d.out_len;
        for (int a = 0; a < d.in_ch; ++a) {
            const T* xr = xp.data() + static_cast<size_t>(a) * padded;
            for (int k = 0; k < d.kernel; ++k) {
                double acc = 0.0;
                for (int t = 0; t < d.out_len; ++t)
                    acc += static_cast<double>(gr[t]) * static_cast<double>(xr[t * d.stride + k]);
                dw[(static_cast<size_t>(b) * d.in_ch + a) * d.kernel + k] = static_cast<T>(acc);
            }
        }
    }
}

} // namespace mwprec::kernels
