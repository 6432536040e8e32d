#include "mwprec/sinc_interp.hpp"

#include <cmath>

namespace mwprec {

double kaiser_i0(double x) {
    // power series for the modified Bessel function I0
    const double q = x * x / 4.0;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

static double normalized_sinc(double u) {
    if (u == 0.0) return 1.0;
    const double pu = M_PI * u;
    return std::sin(pu) / pu;
}

double sinc_interp_at(const double* x, size_t n, double pos) {
    const int half = (kSincTaps - 1) / 2;
    const long center = static_cast<long>(std::lround(pos));
    // Offsets u = pos - j stay within [-half-0.5, half+0.5]; that is the
    // Kaiser window's support below.
    const double span = half + 0.5;
    static const double i0_beta = kaiser_i0(kSincKaiserBeta);

    // Taps are normalized to unit sum so constants interpolate exactly;
    // out-of-range input samples still read as zero.
    double acc = 0.0, tap_sum = 0.0;
    for (long j = center - half; j <= center + half; ++j) {
        const double u = pos - static_cast<double>(j);
        const double t = u / span;
        const double tap =
            normalized_sinc(u) * kaiser_i0(kSincKaiserBeta * std::sqrt(1.0 - t * t)) / i0_beta;
        tap_sum += tap;
        if (j >= 0 && j < static_cast<long>(n)) acc += x[j] * tap;
    }
    return acc / tap_sum;
}

std::vector<double> fractional_delay(const std::vector<double>& x, double delay) {
    std::vector<double> y(x.size(), 0.0);
    if (x.empty()) return y;
    // Integer delays reduce to an exact shift (sinc hits the grid).
    const double r = delay - std::floor(delay);
    if (r == 0.0) {
        const long d = static_cast<long>(std::floor(delay));
        for (long i = 0; i < static_cast<long>(x.size()); ++i) {
            const long j = i - d;
            y[i] = (j >= 0 && j < static_cast<long>(x.size())) ? x[j] : 0.0;
        }
        return y;
    }
    for (size_t i = 0; i < x.size(); ++i)
        y[i] = sinc_interp_at(x.data(), x.size(), static_cast<double>(i) - delay);
    return y;
}

} // namespace mwprec
