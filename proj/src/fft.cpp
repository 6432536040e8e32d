#include "mwprec/fft.hpp"

#include <cmath>

#include "mwprec/errors.hpp"

namespace mwprec {

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw PreconditionError("fft: size must be a nonzero power of two");

    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

std::vector<std::complex<double>> fft_real(const std::vector<double>& x) {
    std::vector<std::complex<double>> a(x.begin(), x.end());
    fft(a, false);
    return a;
}

std::vector<double> magnitude_spectrum(const std::vector<double>& x) {
    const size_t n = next_pow2(x.size());
    std::vector<std::complex<double>> a(n);
    for (size_t i = 0; i < x.size(); ++i) a[i] = x[i];
    fft(a, false);
    std::vector<double> mag(n / 2 + 1);
    for (size_t k = 0; k <= n / 2; ++k) mag[k] = std::abs(a[k]);
    return mag;
}

std::vector<std::complex<double>> analytic_signal(const std::vector<double>& x) {
    if (x.empty()) throw PreconditionError("analytic_signal: empty input");
    const size_t n = next_pow2(x.size());
    std::vector<std::complex<double>> a(n);
    for (size_t i = 0; i < x.size(); ++i) a[i] = x[i];
    fft(a, false);
    // keep DC and Nyquist, double positive frequencies, zero negatives
    for (size_t k = 1; k < n / 2; ++k) a[k] *= 2.0;
    for (size_t k = n / 2 + 1; k < n; ++k) a[k] = 0.0;
    fft(a, true);
    a.resize(x.size());
    return a;
}

std::vector<double> instantaneous_frequency(const std::vector<double>& x, double sample_rate) {
    const auto z = analytic_signal(x);
    const size_t n = z.size();
    std::vector<double> f(n, 0.0);
    const double scale = sample_rate / (2.0 * M_PI);
    for (size_t i = 0; i + 1 < n; ++i) {
        const std::complex<double> r = z[i + 1] * std::conj(z[i]);
        f[i] = std::atan2(r.imag(), r.real()) * scale;
    }
    if (n >= 2) f[n - 1] = f[n - 2];
    return f;
}

} // namespace mwprec
