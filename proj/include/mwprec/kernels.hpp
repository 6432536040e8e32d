#pragma once

#include <string>

namespace mwprec::kernels {

// Geometry of one strided "SAME" 1D convolution.
//   y[b][t] = bias[b] + sum_{a,k} w[(b*in_ch+a)*kernel+k] * xpad[a][t*stride+k]
// with xpad zero-padded by pad_left on the left, pad_total in total.
struct ConvDims {
    int in_ch;    // A
    int out_ch;   // B
    int kernel;   // K
    int stride;   // s
    int in_len;   // L
    int out_len;  // M = ceil(L / s)
    int pad_left;
    int pad_total;
};

ConvDims make_conv_dims(int in_ch, int out_ch, int kernel, int stride, int in_len);

// Kernel contract shared by every backend: each output element is one
// double-precision accumulation chain in a fixed order (a ascending, k
// ascending for fwd; valid-k ascending, b ascending for adj), seeded with
// the bias and rounded to float once at the end. fwd and adj are therefore
// bit-identical across backends; wgrad reduces over t with a lane-split
// order, so backends agree only to rounding there.
using ConvFwdFn = void (*)(const float* x, const float* w, const float* bias, float* y,
                           const ConvDims& d);
// adjoint: z[a][u] = bias[a] + sum_{k,b} w[(b*A+a)*K+k] * y[b][(u+pad_left-k)/s]
using ConvAdjFn = ConvFwdFn;
// dw[(b*A+a)*K+k] = sum_t g[b][t] * xpad[a][t*s+k]
using ConvWGradFn = void (*)(const float* x, const float* g, float* dw, const ConvDims& d);

struct Table {
    ConvFwdFn fwd;
    ConvAdjFn adj;
    ConvWGradFn wgrad;
    const char* name;
};

enum class Backend { Auto, Scalar, Avx2 };

bool avx2_available();
void set_backend(Backend b); // throws PreconditionError if unavailable
Backend requested_backend();
const Table& active();       // resolves Auto to the best available
const Table& scalar_table();
const Table* avx2_table();   // nullptr when not compiled in or not supported

Backend parse_backend(const std::string& name); // "auto" | "scalar" | "avx2"
const char* backend_name(Backend b);

} // namespace mwprec::kernels
