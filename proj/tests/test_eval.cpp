#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>

#include "mwprec/eval.hpp"
#include "mwprec/rng.hpp"
#include "mwprec/signals.hpp"

using namespace mwprec;

namespace {

Dataset tiny_dataset(uint32_t length = 64) {
    SignalConfig sig;
    sig.record_length = length;
    AcquisitionConfig acq;
    acq.noise_rms = 0.02;
    acq.avg_count = 16;
    return build_dataset(sig, pps_like_preset(), acq, 6, 4, 2, 13);
}

} // namespace

TEST_CASE("mse: trivial values and agreement with the naive two-pass oracle") {
    CHECK(mse(std::vector<float>{1, 1}, std::vector<float>{0, 0}) == 1.0);
    CHECK(mse(std::vector<float>{3, -2, 5}, std::vector<float>{3, -2, 5}) == 0.0);

    Rng rng(4);
    std::vector<double> a(1000), b(1000);
    for (auto& v : a) v = rng.uniform(-1, 1);
    for (auto& v : b) v = rng.uniform(-1, 1);
    double naive = 0.0;
    for (size_t i = 0; i < a.size(); ++i) naive += (a[i] - b[i]) * (a[i] - b[i]);
    naive /= static_cast<double>(a.size());
    CHECK(std::fabs(mse(a, b) - naive) <= 1e-12);

    CHECK_THROWS_AS(mse(std::vector<float>{1}, std::vector<float>{1, 2}), PreconditionError);
}

TEST_CASE("improvement_db: identities, antisymmetry, unbounded sentinel") {
    CHECK(*improvement_db(1.0, 1.0) == 0.0);
    CHECK(*improvement_db(100.0, 1.0) == doctest::Approx(20.0));
    const auto fwd = improvement_db(0.37, 0.11);
    const auto rev = improvement_db(0.11, 0.37);
    CHECK(*fwd == doctest::Approx(-*rev).epsilon(1e-12));
    CHECK_FALSE(improvement_db(1.0, 0.0).has_value());
    CHECK_THROWS_AS(improvement_db(0.0, 1.0), PreconditionError);
    // report-formatting context from the source system: 17.46/18.77/20.91 dB
    CHECK(*improvement_db(55.7, 1.0) > 17.0);
}

TEST_CASE("stft: zero input, frame count, invalid sizes") {
    Waveform zero;
    zero.sample_rate = 100.0;
    zero.samples.assign(1000, 0.0);
    const auto s = stft(zero, 256, 64);
    CHECK(s.frames.size() == (1000 - 256) / 64 + 1);
    CHECK(s.bins() == 129);
    for (const auto& f : s.frames)
        for (double m : f) CHECK(m == 0.0);

    CHECK_THROWS_AS(stft(zero, 2048, 64), PreconditionError);
    CHECK_THROWS_AS(stft(zero, 256, 0), PreconditionError);
}

TEST_CASE("stft: a bin-centered tone peaks in its bin in every frame") {
    const double fs = 20e9;
    const size_t n = 4096;
    const double f = 24.0 * fs / 256.0; // bin 24 of a 256-point window
    Waveform w;
    w.sample_rate = fs;
    w.samples.resize(n);
    for (size_t i = 0; i < n; ++i)
        w.samples[i] = std::sin(2.0 * M_PI * f * static_cast<double>(i) / fs);
    const auto s = stft(w, 256, 64);
    for (const auto& frame : s.frames) {
        size_t argmax = 0;
        for (size_t k = 1; k < frame.size(); ++k)
            if (frame[k] > frame[argmax]) argmax = k;
        CHECK(argmax == 24);
    }
}

TEST_CASE("stft: LFM ridge climbs monotonically") {
    const auto w = gen_lfm(0.0, 3e9, 204.8e-9, 20e9, 1.0); // 4096 samples
    const auto s = stft(w, 256, 64);
    size_t prev = 0;
    for (const auto& frame : s.frames) {
        size_t argmax = 0;
        for (size_t k = 1; k < frame.size(); ++k)
            if (frame[k] > frame[argmax]) argmax = k;
        CHECK(argmax >= prev);
        prev = argmax;
    }
    // ridge must actually sweep: 3 GHz at 20 GS/s over a 256-pad window
    CHECK(prev > 30);
}

TEST_CASE("stft frame energy obeys Parseval against the windowed time signal") {
    Rng rng(17);
    Waveform w;
    w.sample_rate = 1.0;
    for (int i = 0; i < 700; ++i) w.samples.push_back(rng.uniform(-1, 1));
    const int W = 256, hop = 64;
    const auto s = stft(w, W, hop);
    std::vector<double> hann(W);
    for (int i = 0; i < W; ++i) hann[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (W - 1)));
    const size_t n = 256; // window length is already a power of two
    for (size_t fidx = 0; fidx < s.frames.size(); ++fidx) {
        double et = 0.0;
        for (int i = 0; i < W; ++i) {
            const double v = w.samples[fidx * hop + i] * hann[i];
            et += v * v;
        }
        const auto& row = s.frames[fidx];
        double ef = row[0] * row[0] + row[n / 2] * row[n / 2];
        for (size_t k = 1; k < n / 2; ++k) ef += 2.0 * row[k] * row[k];
        ef /= static_cast<double>(n);
        CHECK(std::fabs(ef - et) <= 1e-9 * std::max(1.0, et));
    }
}

TEST_CASE("evaluate: identity network reports exactly 0 dB everywhere") {
    const auto ds = tiny_dataset();
    const auto net = Rae<float>::standard(); // zero weights = identity
    const auto rep = evaluate_validation(net, ds);
    REQUIRE(rep.rows.size() == ds.val_count());
    for (const auto& r : rep.rows) {
        CHECK(r.mse_after == r.mse_before);
        REQUIRE(r.improvement_db.has_value());
        CHECK(*r.improvement_db == 0.0);
    }
    REQUIRE(rep.mean_improvement_db.has_value());
    CHECK(*rep.mean_improvement_db == 0.0);
}

TEST_CASE("evaluate: clean fed as recovered yields the unbounded sentinel") {
    auto ds = tiny_dataset();
    for (auto& ex : ds.examples) ex.distorted = ex.clean; // perfect oracle
    const auto net = Rae<float>::standard();
    const auto rep = evaluate_validation(net, ds);
    for (const auto& r : rep.rows) {
        CHECK(r.mse_after == 0.0);
        CHECK_FALSE(r.improvement_db.has_value());
    }
    CHECK_FALSE(rep.mean_improvement_db.has_value());
}

TEST_CASE("report CSV carries the sentinel and all rows") {
    const auto ds = tiny_dataset();
    const auto net = Rae<float>::standard();
    auto rep = evaluate_validation(net, ds);
    rep.rows[0].mse_after = 0.0;
    rep.rows[0].improvement_db.reset();
    save_report_csv("tmp_report.csv", rep);
    std::ifstream is("tmp_report.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "index,mse_before,mse_after,improvement_db");
    std::getline(is, line);
    CHECK(line.find("unbounded") != std::string::npos);
    size_t rows = 1;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == rep.rows.size());
}

TEST_CASE("noise sweep at AWGN level 0 matches plain evaluate") {
    const auto ds = tiny_dataset();
    auto net = Rae<float>::standard();
    net.init_params(21);
    SweepConfig sweep;
    sweep.awgn_levels = {0.0};
    sweep.avg_counts = {};
    const auto points = noise_sweep(net, ds, pps_like_preset(), 0.02, sweep);
    REQUIRE(points.size() == 1);
    const auto rep = evaluate_validation(net, ds);
    CHECK(points[0].mse_before == doctest::Approx(rep.mean_mse_before).epsilon(1e-12));
    CHECK(points[0].mse_after == doctest::Approx(rep.mean_mse_after).epsilon(1e-12));
}

TEST_CASE("noise sweep: mse_before grows monotonically with the AWGN level") {
    const auto ds = tiny_dataset(128);
    const auto net = Rae<float>::standard();
    SweepConfig sweep;
    sweep.awgn_levels = default_awgn_levels();
    sweep.avg_counts = {};
    const auto points = noise_sweep(net, ds, pps_like_preset(), 0.02, sweep);
    REQUIRE(points.size() == 10);
    for (size_t i = 1; i < points.size(); ++i)
        CHECK(points[i].mse_before >= points[i - 1].mse_before);
}

TEST_CASE("sweep CSV format") {
    std::vector<SweepPoint> pts = {{"awgn", 0.01, 0.5, 0.25}, {"avg", 128, 0.5, 0.125}};
    save_sweep_csv("tmp_sweep.csv", pts);
    std::ifstream is("tmp_sweep.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "noise_kind,level,mse_before,mse_after");
    std::getline(is, line);
    CHECK(line.substr(0, 5) == "awgn,");
}
