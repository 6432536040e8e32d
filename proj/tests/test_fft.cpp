#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "mwprec/errors.hpp"
#include "mwprec/fft.hpp"
#include "mwprec/rng.hpp"
#include "mwprec/sinc_interp.hpp"

using namespace mwprec;

TEST_CASE("fft matches a naive DFT on random input") {
    Rng rng(1);
    const size_t n = 256;
    std::vector<std::complex<double>> a(n);
    for (auto& z : a) z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto b = a;
    fft(b, false);
    for (size_t k = 0; k < n; k += 17) { // spot bins
        std::complex<double> acc = 0.0;
        for (size_t t = 0; t < n; ++t)
            acc += a[t] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(k * t) / n);
        CHECK(std::abs(b[k] - acc) < 1e-9);
    }
    fft(b, true);
    for (size_t i = 0; i < n; ++i) CHECK(std::abs(b[i] - a[i]) < 1e-12);
    std::vector<std::complex<double>> bad(3);
    CHECK_THROWS_AS(fft(bad, false), PreconditionError);
}

TEST_CASE("analytic signal of a tone has unit-magnitude envelope and exact frequency") {
    const double fs = 100.0, f = 12.5;
    std::vector<double> x(512);
    for (size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(2.0 * M_PI * f * static_cast<double>(i) / fs);
    const auto z = analytic_signal(x);
    for (size_t i = 10; i + 10 < z.size(); ++i)
        CHECK(std::abs(std::abs(z[i]) - 1.0) < 1e-9);
    const auto inst = instantaneous_frequency(x, fs);
    for (size_t i = 10; i + 10 < inst.size(); ++i)
        CHECK(inst[i] == doctest::Approx(f).epsilon(1e-9));
}

TEST_CASE("kaiser I0 series against known values") {
    CHECK(kaiser_i0(0.0) == 1.0);
    // I0(1) = 1.2660658..., I0(8) = 427.56411...
    CHECK(kaiser_i0(1.0) == doctest::Approx(1.2660658777520084).epsilon(1e-12));
    CHECK(kaiser_i0(8.0) == doctest::Approx(427.56411572180474).epsilon(1e-10));
}

TEST_CASE("fractional delay: integer delays are exact shifts") {
    Rng rng(4);
    std::vector<double> x(100);
    for (auto& v : x) v = rng.uniform(-1, 1);
    const auto y = fractional_delay(x, 7.0);
    for (size_t i = 7; i < x.size(); ++i) CHECK(y[i] == x[i - 7]);
    for (size_t i = 0; i < 7; ++i) CHECK(y[i] == 0.0);
}

TEST_CASE("fractional delay of a band-limited tone is phase-accurate") {
    // 33-tap Kaiser(8) leaves ~1e-4 worst-case ripple; well under the
    // channel noise this interpolator feeds
    const double fs = 20.0, d = 0.37;
    for (double f : {0.5, 2.0, 6.0}) {
        std::vector<double> x(400);
        for (size_t i = 0; i < x.size(); ++i)
            x[i] = std::sin(2.0 * M_PI * f * static_cast<double>(i) / fs);
        const auto y = fractional_delay(x, d);
        for (size_t i = 40; i + 40 < x.size(); ++i) {
            const double expect = std::sin(2.0 * M_PI * f * (static_cast<double>(i) - d) / fs);
            CHECK(std::fabs(y[i] - expect) < 2e-4);
        }
    }
}

TEST_CASE("fractional delay interpolates constants exactly (unit tap sum)") {
    std::vector<double> x(120, 0.7);
    const auto y = fractional_delay(x, 0.41);
    for (size_t i = 20; i + 20 < x.size(); ++i)
        CHECK(y[i] == doctest::Approx(0.7).epsilon(1e-12));
}
