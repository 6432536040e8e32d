#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "mwprec/errors.hpp"
#include "mwprec/fft.hpp"
#include "mwprec/rng.hpp"
#include "mwprec/signals.hpp"

using namespace mwprec;

TEST_CASE("degenerate chirp is a pure sine; first sample is zero") {
    const double f0 = 1e9, fs = 20e9;
    const auto w = gen_lfm(f0, f0, 100e-9, fs, 0.7);
    REQUIRE(w.size() == 2000);
    CHECK(w.samples[0] == 0.0);
    for (size_t i = 0; i < w.size(); ++i) {
        const double t = static_cast<double>(i) / fs;
        CHECK(w.samples[i] == doctest::Approx(0.7 * std::sin(2.0 * M_PI * f0 * t)).epsilon(1e-12));
    }
    const auto chirp = gen_lfm(0.0, 3e9, 100e-9, fs, 1.0);
    CHECK(chirp.samples[0] == 0.0);
}

TEST_CASE("LFM instantaneous-frequency slope matches the programmed 1.5e16 Hz/s within 1%") {
    const double fs = 20e9;
    const auto w = gen_lfm(0.0, 3e9, 200e-9, fs, 1.0);
    REQUIRE(w.size() == 4000);
    const auto inst = instantaneous_frequency(w.samples, fs);

    // least-squares slope over the central 80%
    const size_t lo = w.size() / 10, hi = w.size() - w.size() / 10;
    double st = 0.0, sf = 0.0, stt = 0.0, stf = 0.0, n = 0.0;
    for (size_t i = lo; i < hi; ++i) {
        const double t = static_cast<double>(i) / fs;
        st += t;
        sf += inst[i];
        stt += t * t;
        stf += t * inst[i];
        n += 1.0;
    }
    const double slope = (n * stf - st * sf) / (n * stt - st * st);
    CHECK(slope == doctest::Approx(1.5e16).epsilon(0.01));

    // monotone increasing estimate for an up-chirp (smoothed to ride over
    // the per-sample estimator ripple)
    const int block = 100;
    double prev = -1e18;
    for (size_t b = lo; b + block < hi; b += block) {
        double mean = 0.0;
        for (int i = 0; i < block; ++i) mean += inst[b + i];
        mean /= block;
        CHECK(mean > prev);
        prev = mean;
    }
}

TEST_CASE("LFM rejects non-positive duration and frequencies at or above Nyquist") {
    CHECK_THROWS_AS(gen_lfm(0.0, 1e9, 0.0, 20e9, 1.0), PreconditionError);
    CHECK_THROWS_AS(gen_lfm(0.0, 1e9, -1e-9, 20e9, 1.0), PreconditionError);
    CHECK_THROWS_WITH_AS(gen_lfm(0.0, 10e9, 1e-7, 20e9, 1.0), doctest::Contains("alias"),
                         PreconditionError);
    CHECK_THROWS_AS(gen_lfm(11e9, 1e9, 1e-7, 20e9, 1.0), PreconditionError);
}

TEST_CASE("Welch-Costas sequences and the difference-triangle property") {
    CHECK(costas_sequence(5, 2) == std::vector<int>{2, 4, 3, 1});
    CHECK(costas_sequence(3, 2) == std::vector<int>{2, 1});

    // exhaustive difference-triangle check over several (p, g)
    for (auto [p, g] : std::vector<std::pair<int, int>>{{5, 2}, {7, 3}, {11, 2}, {13, 2}}) {
        const auto seq = costas_sequence(p, g);
        const int n = static_cast<int>(seq.size());
        for (int d = 1; d < n; ++d) {
            std::set<int> diffs;
            for (int i = 0; i + d < n; ++i) {
                const int diff = seq[i + d] - seq[i];
                CHECK(diffs.count(diff) == 0);
                diffs.insert(diff);
            }
        }
    }

    CHECK_THROWS_WITH_AS(costas_sequence(8, 3), doctest::Contains("not prime"), PreconditionError);
    CHECK_THROWS_WITH_AS(costas_sequence(7, 2), doctest::Contains("primitive root"),
                         PreconditionError); // 2^3 = 1 mod 7
    CHECK_THROWS_AS(
        gen_costas(11, 2, 5e9, 0.6e9, 2e-8, 20e9), // top hop would pass Nyquist
        PreconditionError);
}

TEST_CASE("each Costas hop segment is a tone in its programmed frequency bin") {
    const int p = 11, g = 2;
    const double fs = 20e9, base = 5e8, spacing = 3.5e8, hop_dur = 2.048e-8;
    const auto w = gen_costas(p, g, base, spacing, hop_dur, fs);
    REQUIRE(w.size() == 4096);
    const auto seq = costas_sequence(p, g);
    const double hop_samples = hop_dur * fs; // 409.6

    for (int h = 0; h < p - 1; ++h) {
        const size_t n0 = static_cast<size_t>(std::ceil(h * hop_samples));
        const size_t n1 = std::min(static_cast<size_t>(std::floor((h + 1) * hop_samples)),
                                   w.size());
        const size_t nseg = n1 - n0;
        // plain DFT magnitude at the segment's natural bins
        int best = -1;
        double best_mag = -1.0;
        for (size_t k = 0; k <= nseg / 2; ++k) {
            double re = 0.0, im = 0.0;
            for (size_t i = 0; i < nseg; ++i) {
                const double ph = 2.0 * M_PI * static_cast<double>(k * i) / nseg;
                re += w.samples[n0 + i] * std::cos(ph);
                im -= w.samples[n0 + i] * std::sin(ph);
            }
            const double mag = re * re + im * im;
            if (mag > best_mag) {
                best_mag = mag;
                best = static_cast<int>(k);
            }
        }
        const double f = base + (seq[h] - 1) * spacing;
        CHECK(best == static_cast<int>(std::lround(f / fs * nseg)));
    }
}

TEST_CASE("Costas hops accumulate phase across boundaries (no resets)") {
    const int p = 11, g = 2;
    const double fs = 20e9, base = 5e8, spacing = 3.5e8, hop_dur = 2.048e-8;
    const auto w = gen_costas(p, g, base, spacing, hop_dur, fs);
    const auto seq = costas_sequence(p, g);
    const double hs = hop_dur * fs;

    // closed-form phase: hop h owns samples [ceil(h*hs), ceil((h+1)*hs))
    auto hop_start = [&](int h) { return static_cast<long>(std::ceil(h * hs)); };
    double carry = 0.0; // accumulated phase at each hop start
    for (int h = 0; h < p - 1; ++h) {
        const double f = base + (seq[h] - 1) * spacing;
        const long n0 = hop_start(h), n1 = std::min<long>(hop_start(h + 1),
                                                          static_cast<long>(w.size()));
        for (long n : {n0, (n0 + n1) / 2, n1 - 1}) {
            const double phase = carry + 2.0 * M_PI * f * static_cast<double>(n - n0) / fs;
            CHECK(w.samples[n] == doctest::Approx(std::sin(phase)).epsilon(1e-6).scale(1.0));
        }
        carry += 2.0 * M_PI * f * static_cast<double>(n1 - n0) / fs;
    }
}

TEST_CASE("target scenes are deterministic and respect every interval") {
    const auto a = sample_target_scene(12345);
    const auto b = sample_target_scene(12345);
    REQUIRE(a.scatterers.size() == b.scatterers.size());
    for (size_t i = 0; i < a.scatterers.size(); ++i) {
        CHECK(a.scatterers[i].cross_section == b.scatterers[i].cross_section);
        CHECK(a.scatterers[i].range_offset == b.scatterers[i].range_offset);
    }
    CHECK(a.radial_velocity == b.radial_velocity);

    std::set<size_t> counts_seen;
    for (uint64_t seed = 0; seed < 10000; ++seed) {
        const auto s = sample_target_scene(seed);
        s.validate(); // throws if any field leaves its interval
        counts_seen.insert(s.scatterers.size());
    }
    for (size_t c = 1; c <= 12; ++c) CHECK(counts_seen.count(c) == 1);
}

TEST_CASE("radial velocity histogram is uniform by chi-square at significance 0.01") {
    const int bins = 16, draws = 10000;
    std::vector<int> hist(bins, 0);
    for (uint64_t seed = 0; seed < draws; ++seed) {
        const auto s = sample_target_scene(seed ^ 0xC0FFEE);
        int b = static_cast<int>(s.radial_velocity / 300.0 * bins);
        if (b == bins) b = bins - 1;
        hist[b] += 1;
    }
    const double expected = static_cast<double>(draws) / bins;
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double d = hist[b] - expected;
        chi2 += d * d / expected;
    }
    // chi-square(df=15) 0.99 quantile
    CHECK(chi2 < 30.578);
}

TEST_CASE("echo: zero-delay unit scatterer reproduces tx exactly") {
    const auto tx = gen_lfm(0.0, 3e9, 50e-9, 20e9, 1.0);
    TargetScene scene;
    scene.scatterers = {{1.0, 0.0, 0.0, 0.0}};
    scene.radial_velocity = 0.0;
    scene.rotation_rate = 0.0;
    const auto echo = synthesize_echo(tx, scene);
    REQUIRE(echo.size() == tx.size());
    for (size_t i = 0; i < tx.size(); ++i) CHECK(echo.samples[i] == tx.samples[i]);
}

TEST_CASE("echo synthesis is linear in the scene (superposition to 1e-9)") {
    const auto tx = gen_lfm(0.0, 3e9, 50e-9, 20e9, 1.0);
    Rng rng(5150);
    TargetScene both;
    both.radial_velocity = rng.uniform(0.0, 300.0);
    both.rotation_rate = rng.uniform(0.0, 0.2);
    for (int i = 0; i < 6; ++i)
        both.scatterers.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 10.0),
                                   rng.uniform(0.0, 1.0), rng.uniform(0.0, 2.0 * M_PI)});
    TargetScene first = both, second = both;
    first.scatterers.assign(both.scatterers.begin(), both.scatterers.begin() + 3);
    second.scatterers.assign(both.scatterers.begin() + 3, both.scatterers.end());

    const auto e_both = synthesize_echo(tx, both);
    const auto e_a = synthesize_echo(tx, first);
    const auto e_b = synthesize_echo(tx, second);
    for (size_t i = 0; i < tx.size(); ++i)
        CHECK(std::fabs(e_both.samples[i] - (e_a.samples[i] + e_b.samples[i])) <= 1e-9);
}

TEST_CASE("single static scatterer at 1.5 m peaks the cross-correlation at lag 200") {
    const double fs = 20e9;
    const auto tx = gen_lfm(0.0, 3e9, 100e-9, fs, 1.0);
    TargetScene scene;
    scene.scatterers = {{1.0, 1.5, 0.0, 0.0}};
    const auto echo = synthesize_echo(tx, scene);

    const int expected_lag =
        static_cast<int>(std::lround(2.0 * 1.5 / kSpeedOfLight * fs)); // 200
    REQUIRE(expected_lag == 200);
    int best_lag = -1;
    double best = -1.0;
    for (int lag = 0; lag < 400; ++lag) {
        double acc = 0.0;
        for (size_t i = 0; i + lag < tx.size(); ++i) acc += tx.samples[i] * echo.samples[i + lag];
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    CHECK(best_lag == expected_lag);
}

TEST_CASE("normalize: examples, exactness and rejections") {
    Waveform w;
    w.sample_rate = 1.0;
    w.samples = {0.5, -1.0};
    const auto n = normalize(w, 0.9);
    CHECK(n.samples[0] == doctest::Approx(0.45).epsilon(1e-15));
    CHECK(n.samples[1] == -0.9);

    const auto again = normalize(n, 0.9);
    CHECK(again.samples[0] == n.samples[0]);
    CHECK(again.samples[1] == n.samples[1]);

    Rng rng(777);
    Waveform r;
    r.sample_rate = 1.0;
    for (int i = 0; i < 1000; ++i) r.samples.push_back(rng.uniform(-3.0, 3.0));
    const auto rn = normalize(r, 0.9);
    double maxabs = 0.0;
    for (double v : rn.samples) maxabs = std::max(maxabs, std::fabs(v));
    CHECK(maxabs == 0.9); // exact by construction

    Waveform zero;
    zero.samples = {0.0, 0.0};
    CHECK_THROWS_AS(normalize(zero, 1.0), PreconditionError);
    Waveform empty;
    CHECK_THROWS_AS(normalize(empty, 1.0), PreconditionError);
}
