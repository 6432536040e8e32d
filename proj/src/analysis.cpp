#include "mwprec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "mwprec/errors.hpp"
#include "mwprec/fft.hpp"

namespace mwprec {

std::vector<std::pair<double, double>> label_segments(const std::vector<double>& x,
                                                      double sample_rate) {
    const int seg = kRaeDownsampling;
    const size_t steps = x.size() / seg;
    const auto inst = instantaneous_frequency(x, sample_rate);

    std::vector<std::pair<double, double>> labels(steps);
    for (size_t j = 0; j < steps; ++j) {
        double fsum = 0.0, esum = 0.0;
        for (int i = 0; i < seg; ++i) {
            const size_t idx = j * seg + i;
            fsum += inst[idx];
            esum += x[idx] * x[idx];
        }
        // edge segments can estimate slightly below zero; frequencies are
        // reported in the physical range
        labels[j] = {std::max(fsum / seg, 0.0), std::sqrt(esum / seg)};
    }
    return labels;
}

std::vector<FeaturePoint> extract_features(const Rae<float>& net, const std::vector<float>& x,
                                           double sample_rate, size_t example_index) {
    FeatureMap<float> in(1, static_cast<int>(x.size()));
    std::memcpy(in.values.data(), x.data(), x.size() * sizeof(float));
    auto [y, cache] = rae_forward(in, net);
    const FeatureMap<float>& bn = cache.bottleneck();

    const std::vector<double> xd(x.begin(), x.end());
    const auto labels = label_segments(xd, sample_rate);
    if (labels.size() != static_cast<size_t>(bn.length))
        throw NumericError("extract_features: label/bottleneck step mismatch");

    std::vector<FeaturePoint> points(bn.length);
    for (int t = 0; t < bn.length; ++t) {
        auto& p = points[t];
        p.vector.resize(bn.channels);
        for (int c = 0; c < bn.channels; ++c) p.vector[c] = bn.row(c)[t];
        p.freq_label = labels[t].first;
        p.amp_label = labels[t].second;
        p.example_index = example_index;
        p.time_step = t;
    }
    return points;
}

double neighbor_label_score(const TsneResult& emb, const std::vector<double>& labels, int k) {
    const size_t n = labels.size();
    if (emb.embedding.size() != n * static_cast<size_t>(emb.output_dims))
        throw PreconditionError("neighbor_label_score: labels/embedding size mismatch");
    if (n < static_cast<size_t>(k) + 1)
        throw PreconditionError("neighbor_label_score: need more points than neighbors");

    double gmean = 0.0;
    for (double l : labels) gmean += l;
    gmean /= static_cast<double>(n);
    double gvar = 0.0;
    for (double l : labels) gvar += (l - gmean) * (l - gmean);
    gvar /= static_cast<double>(n - 1);
    const double gstd = std::sqrt(gvar);
    if (gstd == 0.0) throw PreconditionError("neighbor_label_score: constant labels");

    const int dims = emb.output_dims;
    std::vector<double> scores(n, 0.0);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        std::vector<std::pair<double, size_t>> d(n);
        for (size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int c = 0; c < dims; ++c) {
                const double diff = emb.embedding[i * dims + c] - emb.embedding[j * dims + c];
                acc += diff * diff;
            }
            d[j] = {acc, j};
        }
        d[i].first = std::numeric_limits<double>::infinity(); // exclude self
        std::partial_sort(d.begin(), d.begin() + k, d.end());
        double mean = 0.0;
        for (int j = 0; j < k; ++j) mean += labels[d[j].second];
        mean /= k;
        double var = 0.0;
        for (int j = 0; j < k; ++j) {
            const double diff = labels[d[j].second] - mean;
            var += diff * diff;
        }
        scores[i] = std::sqrt(var / (k - 1));
    }
    double acc = 0.0;
    for (double s : scores) acc += s;
    return acc / static_cast<double>(n) / gstd;
}

DependencyStudy dependency_study(const Rae<float>& net, const Dataset& ds, size_t max_points,
                                 const TsneConfig& cfg) {
    if (ds.val_count() == 0) throw PreconditionError("dependency_study: empty validation split");

    DependencyStudy study;
    std::vector<FeaturePoint> all;
    for (size_t i = ds.train_count(); i < ds.examples.size(); ++i) {
        auto pts = extract_features(net, ds.examples[i].distorted, ds.sample_rate, i);
        for (auto& p : pts) all.push_back(std::move(p));
    }
    // even-stride subsample to the point budget
    const size_t stride = (all.size() + max_points - 1) / max_points;
    for (size_t i = 0; i < all.size(); i += std::max<size_t>(stride, 1))
        study.points.push_back(std::move(all[i]));

    std::vector<std::vector<double>> vecs(study.points.size());
    std::vector<double> freq(study.points.size()), amp(study.points.size());
    for (size_t i = 0; i < study.points.size(); ++i) {
        vecs[i] = study.points[i].vector;
        freq[i] = study.points[i].freq_label;
        amp[i] = study.points[i].amp_label;
    }
    study.embedding = tsne(vecs, cfg);
    study.freq_score = neighbor_label_score(study.embedding, freq);
    study.amp_score = neighbor_label_score(study.embedding, amp);
    return study;
}

void save_embedding_csv(const std::string& path, const DependencyStudy& study) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << "x,y,z,freq_label,amp_label,example,step\n";
    char buf[256];
    for (size_t i = 0; i < study.points.size(); ++i) {
        const double* p = study.embedding.point(i);
        const double z = study.embedding.output_dims > 2 ? p[2] : 0.0;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%d\n", p[0], p[1], z,
                      study.points[i].freq_label, study.points[i].amp_label,
                      study.points[i].example_index, study.points[i].time_step);
        os << buf;
    }
}

} // namespace mwprec
