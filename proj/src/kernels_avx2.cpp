// AVX2 variants of the conv kernels. Same per-element accumulation chains as
// the scalar reference (see kernels.hpp), vectorized four output elements per
// lane group, so fwd/adj results are bit-identical to the scalar backend.

#include <immintrin.h>

#include <vector>

#include "mwprec/kernels.hpp"

namespace mwprec::kernels::detail {

namespace {

// Padded copy with an 8-float tail margin: the stride-2 loader reads one
// float past the last element it uses.
void pad_margin(const float* x, const ConvDims& d, std::vector<float>& xp) {
    const size_t padded = static_cast<size_t>(d.in_len) + d.pad_total;
    xp.assign(static_cast<size_t>(d.in_ch) * padded + 8, 0.0f);
    for (int a = 0; a < d.in_ch; ++a) {
        float* row = xp.data() + static_cast<size_t>(a) * padded + d.pad_left;
        const float* src = x + static_cast<size_t>(a) * d.in_len;
        for (int i = 0; i < d.in_len; ++i) row[i] = src[i];
    }
}

// lane i = p[i*s], converted to double
inline __m256d load4s(const float* p, int s) {
    if (s == 1) return _mm256_cvtps_pd(_mm_loadu_ps(p));
    if (s == 2) {
        const __m256 v = _mm256_loadu_ps(p);
        const __m256 ev = _mm256_permutevar8x32_ps(v, _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7));
        return _mm256_cvtps_pd(_mm256_castps256_ps128(ev));
    }
    return _mm256_set_pd(static_cast<double>(p[3 * s]), static_cast<double>(p[2 * s]),
                         static_cast<double>(p[1 * s]), static_cast<double>(p[0]));
}

void conv_fwd_avx2(const float* x, const float* w, const float* bias, float* y,
                   const ConvDims& d) {
    thread_local std::vector<float> xp;
    pad_margin(x, d, xp);
    const int A = d.in_ch, B = d.out_ch, K = d.kernel, s = d.stride, M = d.out_len;
    const size_t padded = static_cast<size_t>(d.in_len) + d.pad_total;

    for (int b = 0; b < B; ++b) {
        const double bv = bias ? static_cast<double>(bias[b]) : 0.0;
        const float* wb = w + static_cast<size_t>(b) * A * K;
        float* yo = y + static_cast<size_t>(b) * M;
        int t = 0;
        for (; t + 16 <= M; t += 16) {
            __m256d acc0 = _mm256_set1_pd(bv);
            __m256d acc1 = acc0, acc2 = acc0, acc3 = acc0;
            for (int a = 0; a < A; ++a) {
                const float* xr = xp.data() + static_cast<size_t>(a) * padded +
                                  static_cast<size_t>(t) * s;
                const float* wr = wb + static_cast<size_t>(a) * K;
                for (int k = 0; k < K; ++k) {
                    const __m256d wv = _mm256_set1_pd(static_cast<double>(wr[k]));
                    const float* p = xr + k;
                    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(wv, load4s(p, s)));
                    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(wv, load4s(p + 4 * s, s)));
                    acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(wv, load4s(p + 8 * s, s)));
                    acc3 = _mm256_add_pd(acc3, _mm256_mul_pd(wv, load4s(p + 12 * s, s)));
                }
            }
            _mm_storeu_ps(yo + t, _mm256_cvtpd_ps(acc0));
            _mm_storeu_ps(yo + t + 4, _mm256_cvtpd_ps(acc1));
            _mm_storeu_ps(yo + t + 8, _mm256_cvtpd_ps(acc2));
            _mm_storeu_ps(yo + t + 12, _mm256_cvtpd_ps(acc3));
        }
        for (; t < M; ++t) {
            double acc = bv;
            for (int a = 0; a < A; ++a) {
                const float* xr = xp.data() + static_cast<size_t>(a) * padded +
                                  static_cast<size_t>(t) * s;
                const float* wr = wb + static_cast<size_t>(a) * K;
                for (int k = 0; k < K; ++k)
                    acc += static_cast<double>(wr[k]) * static_cast<double>(xr[k]);
            }
            yo[t] = static_cast<float>(acc);
        }
    }
}

void conv_adj_avx2(const float* y, const float* w, const float* bias, float* z,
                   const ConvDims& d) {
    const int A = d.in_ch, B = d.out_ch, K = d.kernel, s = d.stride;
    const int M = d.out_len, L = d.in_len, pl = d.pad_left;

    std::vector<int> ks(K), off(K);
    for (int a = 0; a < A; ++a) {
        const double bv = bias ? static_cast<double>(bias[a]) : 0.0;
        float* za = z + static_cast<size_t>(a) * L;
        for (int r = 0; r < s && r < L; ++r) {
            int nk = 0;
            for (int k = 0; k < K; ++k) {
                const int num = r + pl - k;
                if (((num % s) + s) % s != 0) continue;
                ks[nk] = k;
                off[nk] = num / s; // exact: num divisible by s
                ++nk;
            }
            const int C = (L - r + s - 1) / s; // members of this residue class
            int lo = 0, hi = C;
            for (int j = 0; j < nk; ++j) {
                if (-off[j] > lo) lo = -off[j];
                if (M - off[j] < hi) hi = M - off[j];
            }
            if (lo > C) lo = C;
            if (hi < lo) hi = lo;

            auto scalar_one = [&](int c) {
                double acc = bv;
                for (int j = 0; j < nk; ++j) {
                    const int t = c + off[j];
                    if (t < 0 || t >= M) continue;
                    const int k = ks[j];
                    for (int b = 0; b < B; ++b)
                        acc += static_cast<double>(
                                   w[(static_cast<size_t>(b) * A + a) * K + k]) *
                               static_cast<double>(y[static_cast<size_t>(b) * M + t]);
                }
                za[r + static_cast<size_t>(c) * s] = static_cast<float>(acc);
            };

            for (int c = 0; c < lo; ++c) scalar_one(c);

            int c = lo;
            for (; c + 4 <= hi; c += 4) {
                __m256d acc = _mm256_set1_pd(bv);
                for (int j = 0; j < nk; ++j) {
                    const int k = ks[j];
                    const int t0 = c + off[j];
                    for (int b = 0; b < B; ++b) {
                        const __m256d wv = _mm256_set1_pd(static_cast<double>(
                            w[(static_cast<size_t>(b) * A + a) * K + k]));
                        const __m256d yv = _mm256_cvtps_pd(
                            _mm_loadu_ps(y + static_cast<size_t>(b) * M + t0));
                        acc = _mm256_add_pd(acc, _mm256_mul_pd(wv, yv));
                    }
                }
                alignas(16) float out4[4];
                _mm_store_ps(out4, _mm256_cvtpd_ps(acc));
                float* zr = za + r + static_cast<size_t>(c) * s;
                zr[0] = out4[0];
                zr[s] = out4[1];
                zr[2 * s] = out4[2];
                zr[3 * s] = out4[3];
            }
            for (; c < hi; ++c) scalar_one(c);
            for (c = hi > lo ? hi : lo; c < C; ++c) scalar_one(c);
        }
    }
}

void conv_wgrad_avx2(const float* x, const float* g, float* dw, const ConvDims& d) {
    thread_local std::vector<float> xp;
    pad_margin(x, d, xp);
    const int A = d.in_ch, B = d.out_ch, K = d.kernel, s = d.stride, M = d.out_len;
    const size_t padded = static_cast<size_t>(d.in_len) + d.pad_total;

    for (int b = 0; b < B; ++b) {
        const float* gr = g + static_cast<size_t>(b) * M;
        for (int a = 0; a < A; ++a) {
            const float* xa = xp.data() + static_cast<size_t>(a) * padded;
            for (int k = 0; k < K; ++k) {
                const float* xr = xa + k;
                __m256d acc0 = _mm256_setzero_pd();
                __m256d acc1 = acc0, acc2 = acc0, acc3 = acc0;
                int t = 0;
                for (; t + 16 <= M; t += 16) {
                    acc0 = _mm256_add_pd(
                        acc0, _mm256_mul_pd(_mm256_cvtps_pd(_mm_loadu_ps(gr + t)),
                                            load4s(xr + static_cast<size_t>(t) * s, s)));
                    acc1 = _mm256_add_pd(
                        acc1, _mm256_mul_pd(_mm256_cvtps_pd(_mm_loadu_ps(gr + t + 4)),
                                            load4s(xr + static_cast<size_t>(t + 4) * s, s)));
                    acc2 = _mm256_add_pd(
                        acc2, _mm256_mul_pd(_mm256_cvtps_pd(_mm_loadu_ps(gr + t + 8)),
                                            load4s(xr + static_cast<size_t>(t + 8) * s, s)));
                    acc3 = _mm256_add_pd(
                        acc3, _mm256_mul_pd(_mm256_cvtps_pd(_mm_loadu_ps(gr + t + 12)),
                                            load4s(xr + static_cast<size_t>(t + 12) * s, s)));
                }
                alignas(32) double tmp[4];
                double sum = 0.0;
                for (const __m256d& acc : {acc0, acc1, acc2, acc3}) {
                    _mm256_store_pd(tmp, acc);
                    sum += tmp[0];
                    sum += tmp[1];
                    sum += tmp[2];
                    sum += tmp[3];
                }
                for (; t < M; ++t)
                    sum += static_cast<double>(gr[t]) *
                           static_cast<double>(xr[static_cast<size_t>(t) * s]);
                dw[(static_cast<size_t>(b) * A + a) * K + k] = static_cast<float>(sum);
            }
        }
    }
}

const Table kAvx2 = {&conv_fwd_avx2, &conv_adj_avx2, &conv_wgrad_avx2, "avx2"};

} // namespace

const Table& avx2_table_impl() { return kAvx2; }

} // namespace mwprec::kernels::detail
