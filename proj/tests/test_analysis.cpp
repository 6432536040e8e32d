#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>

#include "mwprec/analysis.hpp"
#include "mwprec/rng.hpp"
#include "mwprec/signals.hpp"

using namespace mwprec;

namespace {

std::vector<float> to_f32(const std::vector<double>& v) {
    return std::vector<float>(v.begin(), v.end());
}

} // namespace

TEST_CASE("extract_features: one 44-vector per bottleneck step; 256 points at L=4096") {
    auto net = Rae<float>::standard();
    net.init_params(3);
    const auto w = gen_lfm(0.0, 3e9, 204.8e-9, 20e9, 0.9);
    const auto pts = extract_features(net, to_f32(w.samples), 20e9, 17);
    REQUIRE(pts.size() == 256);
    for (const auto& p : pts) {
        CHECK(p.vector.size() == 44);
        CHECK(p.example_index == 17);
        CHECK(std::isfinite(p.freq_label));
        CHECK(p.freq_label >= 0.0);
        CHECK(p.amp_label >= 0.0);
    }
    CHECK(pts[0].time_step == 0);
    CHECK(pts[255].time_step == 255);
}

TEST_CASE("zero parameters give all-zero bottleneck vectors") {
    const auto net = Rae<float>::standard();
    const auto w = gen_lfm(0.0, 3e9, 51.2e-9, 20e9, 0.9); // 1024 samples
    const auto pts = extract_features(net, to_f32(w.samples), 20e9, 0);
    REQUIRE(pts.size() == 64);
    for (const auto& p : pts)
        for (double v : p.vector) CHECK(v == 0.0);
}

TEST_CASE("feature vectors depend only on the receptive field") {
    auto net = Rae<float>::standard();
    net.init_params(77);
    Rng rng(12);
    std::vector<float> x(1024);
    for (auto& v : x) v = static_cast<float>(rng.uniform(-0.9, 0.9));

    const int step = 32;               // bottleneck step under scrutiny
    const int center = step * 16 + 8;  // its input-segment center
    const int margin = 100;            // encoder receptive field is 69 wide

    const auto base = extract_features(net, x, 20e9, 0);
    std::vector<float> far = x;
    far[center + margin] += 0.5f;
    far[center - margin] -= 0.5f;
    const auto moved_far = extract_features(net, far, 20e9, 0);
    CHECK(moved_far[step].vector == base[step].vector); // outside the field

    std::vector<float> near = x;
    near[center] += 0.5f;
    const auto moved_near = extract_features(net, near, 20e9, 0);
    CHECK(moved_near[step].vector != base[step].vector); // inside the field
}

TEST_CASE("labels: pure tone frequency within 0.5%, constant envelope within 1%") {
    const double fs = 20e9, f = 1.25e9;
    std::vector<double> x(1024);
    for (size_t i = 0; i < x.size(); ++i)
        x[i] = 0.8 * std::sin(2.0 * M_PI * f * static_cast<double>(i) / fs);
    const auto labels = label_segments(x, fs);
    REQUIRE(labels.size() == 64);
    const double rms = 0.8 / std::sqrt(2.0);
    for (size_t j = 1; j + 1 < labels.size(); ++j) { // interior (edges see FFT padding)
        CHECK(std::fabs(labels[j].first - f) <= 0.005 * f);
        CHECK(std::fabs(labels[j].second - rms) <= 0.01 * rms);
    }
}

TEST_CASE("labels: LFM frequency labels climb across steps") {
    const auto w = gen_lfm(0.0, 3e9, 51.2e-9, 20e9, 0.9);
    const auto labels = label_segments(w.samples, 20e9);
    // chirp step between segments is ~47 MHz; the estimator ripples by a
    // few MHz, so compare two steps apart
    for (size_t j = 4; j + 4 < labels.size(); ++j)
        CHECK(labels[j].first > labels[j - 2].first);
    CHECK(labels[labels.size() - 5].first > labels[4].first + 2e9);
}

TEST_CASE("neighbor label score: shuffled labels sit near 1, structure scores lower") {
    // synthetic embedding: three tight blobs with distinct labels
    Rng rng(5);
    TsneResult emb;
    emb.output_dims = 3;
    std::vector<double> labels;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 40; ++i) {
            emb.embedding.push_back(10.0 * c + 0.1 * rng.normal());
            emb.embedding.push_back(0.1 * rng.normal());
            emb.embedding.push_back(0.1 * rng.normal());
            labels.push_back(static_cast<double>(c));
        }
    const double structured = neighbor_label_score(emb, labels);
    CHECK(structured < 0.2); // same-label neighbors only

    std::vector<double> shuffled = labels;
    for (size_t i = shuffled.size() - 1; i > 0; --i)
        std::swap(shuffled[i], shuffled[rng.uniform_index(i + 1)]);
    const double null_score = neighbor_label_score(emb, shuffled);
    CHECK(std::fabs(null_score - 1.0) <= 0.1);
}

TEST_CASE("neighbor label score is invariant under rigid rotation") {
    Rng rng(9);
    TsneResult emb;
    emb.output_dims = 3;
    std::vector<double> labels;
    for (int i = 0; i < 100; ++i) {
        for (int k = 0; k < 3; ++k) emb.embedding.push_back(rng.uniform(-5, 5));
        labels.push_back(rng.uniform(0, 1));
    }
    const double s0 = neighbor_label_score(emb, labels);

    // rotate about z by 0.7 rad
    TsneResult rot = emb;
    const double c = std::cos(0.7), s = std::sin(0.7);
    for (size_t i = 0; i < labels.size(); ++i) {
        const double x = emb.embedding[i * 3], y = emb.embedding[i * 3 + 1];
        rot.embedding[i * 3] = c * x - s * y;
        rot.embedding[i * 3 + 1] = s * x + c * y;
    }
    const double s1 = neighbor_label_score(rot, labels);
    CHECK(s0 == doctest::Approx(s1).epsilon(1e-9));
}

TEST_CASE("dependency study: subsampling respects the budget and emits CSV") {
    SignalConfig sig;
    sig.record_length = 256;
    AcquisitionConfig acq;
    const auto ds = build_dataset(sig, pps_like_preset(), acq, 8, 4, 4, 3);
    auto net = Rae<float>::standard();
    net.init_params(1);

    TsneConfig cfg;
    cfg.perplexity = 5.0;
    cfg.iterations = 150;
    cfg.seed = 2;
    const auto study = dependency_study(net, ds, 60, cfg);
    CHECK(study.points.size() <= 60);
    CHECK(study.points.size() >= 16);
    CHECK(study.freq_score > 0.0);
    CHECK(study.amp_score > 0.0);

    save_embedding_csv("tmp_embed.csv", study);
    std::ifstream is("tmp_embed.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,z,freq_label,amp_label,example,step");
    size_t rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == study.points.size());
}
