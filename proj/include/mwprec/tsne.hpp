#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mwprec {

struct TsneConfig {
    double perplexity = 30.0;
    int output_dims = 3;
    int iterations = 1000;
    uint64_t seed = 7;
    double eta = 200.0;
    double early_exaggeration = 12.0;
    int exaggeration_until = 250;
    int momentum_switch_at = 250; // momentum 0.5 before, 0.8 after
};

struct TsneResult {
    int output_dims = 3;
    std::vector<double> embedding; // n x output_dims, row-major
    double kl_after_exaggeration = 0.0;
    double final_kl = 0.0;

    const double* point(size_t i) const { return embedding.data() + i * output_dims; }
};

// Per-point Gaussian affinities: bandwidths binary-searched so each row's
// entropy hits log(perplexity). Rows sum to 1 (self-affinity zero).
struct GaussianAffinities {
    size_t n = 0;
    std::vector<double> p; // n x n conditional probabilities, row-major
    std::vector<double> beta;
};

GaussianAffinities gaussian_affinities(const std::vector<std::vector<double>>& points,
                                       double perplexity);

// Exact (non-tree) t-SNE: symmetrized affinities, Student-t low-dimensional
// kernel, gradient descent with momentum/gains and early exaggeration.
TsneResult tsne(const std::vector<std::vector<double>>& points, const TsneConfig& cfg);

// Mean silhouette of an embedding against integer labels.
double silhouette_score(const TsneResult& emb, const std::vector<int>& labels);

} // namespace mwprec
