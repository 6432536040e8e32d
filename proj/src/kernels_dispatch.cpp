#include "mwprec/kernels.hpp"

#include "mwprec/errors.hpp"
#include "mwprec/kernels_ref.hpp"

namespace mwprec::kernels {

ConvDims make_conv_dims(int in_ch, int out_ch, int kernel, int stride, int in_len) {
    if (in_ch < 1 || out_ch < 1 || kernel < 1 || stride < 1 || in_len < 1)
        throw PreconditionError("conv dims must be positive");
    ConvDims d;
    d.in_ch = in_ch;
    d.out_ch = out_ch;
    d.kernel = kernel;
    d.stride = stride;
    d.in_len = in_len;
    d.out_len = (in_len + stride - 1) / stride;
    const int needed = (d.out_len - 1) * stride + kernel - in_len;
    d.pad_total = needed > 0 ? needed : 0;
    d.pad_left = d.pad_total / 2;
    return d;
}

namespace {

const Table kScalar = {
    &conv_fwd_ref<float>,
    &conv_adj_ref<float>,
    &conv_wgrad_ref<float>,
    "scalar",
};

Backend g_requested = Backend::Auto;

} // namespace

bool avx2_available() {
#if defined(MWPREC_HAVE_AVX2) && (defined(__x86_64__) || defined(_M_X64))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Table& scalar_table() { return kScalar; }

#if defined(MWPREC_HAVE_AVX2)
namespace detail {
const Table& avx2_table_impl(); // kernels_avx2.cpp
}
#endif

const Table* avx2_table() {
#if defined(MWPREC_HAVE_AVX2)
    if (avx2_available()) return &detail::avx2_table_impl();
#endif
    return nullptr;
}

void set_backend(Backend b) {
    if (b == Backend::Avx2 && avx2_table() == nullptr)
        throw PreconditionError("avx2 kernel backend requested but not available on this machine");
    g_requested = b;
}

Backend requested_backend() { return g_requested; }

const Table& active() {
    switch (g_requested) {
        case Backend::Scalar: return kScalar;
        case Backend::Avx2: return *avx2_table();
        case Backend::Auto:
        default: {
            const Table* a = avx2_table();
            return a ? *a : kScalar;
        }
    }
}

Backend parse_backend(const std::string& name) {
    if (name == "auto") return Backend::Auto;
    if (name == "scalar") return Backend::Scalar;
    if (name == "avx2") return Backend::Avx2;
    throw ConfigError("unknown kernel backend '" + name + "' (expected auto, scalar or avx2)");
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        default: return "auto";
    }
}

} // namespace mwprec::kernels
