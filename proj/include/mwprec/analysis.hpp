#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwprec/dataset.hpp"
#include "mwprec/rae.hpp"
#include "mwprec/tsne.hpp"

namespace mwprec {

// One bottleneck time-step: the feature vector across channels plus the
// local frequency/amplitude of the input segment under it.
struct FeaturePoint {
    std::vector<double> vector;
    double freq_label = 0.0; // Hz
    double amp_label = 0.0;  // segment rms
    size_t example_index = 0;
    int time_step = 0;
};

// Runs the forward pass and reads the bottleneck (C x L/16); one point per
// bottleneck step. Labels come from label_segments on the same input.
std::vector<FeaturePoint> extract_features(const Rae<float>& net, const std::vector<float>& x,
                                           double sample_rate, size_t example_index);

// freq = mean instantaneous frequency over the 16-sample segment aligned
// under each bottleneck step; amp = segment rms.
std::vector<std::pair<double, double>> label_segments(const std::vector<double>& x,
                                                      double sample_rate);

// Mean over points of the label standard deviation among each point's k
// nearest embedded neighbors, normalized by the global label standard
// deviation. Lower = stronger dependency.
double neighbor_label_score(const TsneResult& emb, const std::vector<double>& labels, int k = 10);

struct DependencyStudy {
    std::vector<FeaturePoint> points; // subsampled
    TsneResult embedding;
    double freq_score = 0.0;
    double amp_score = 0.0;
};

DependencyStudy dependency_study(const Rae<float>& net, const Dataset& ds, size_t max_points,
                                 const TsneConfig& cfg);

// CSV: x,y,z,freq_label,amp_label,example,step
void save_embedding_csv(const std::string& path, const DependencyStudy& study);

} // namespace mwprec
