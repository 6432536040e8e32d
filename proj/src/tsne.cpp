#include "mwprec/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mwprec/errors.hpp"
#include "mwprec/rng.hpp"

namespace mwprec {

namespace {

std::vector<double> squared_distances(const std::vector<std::vector<double>>& pts) {
    const size_t n = pts.size();
    std::vector<double> dd(n * n, 0.0);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double d = 0.0;
            for (size_t k = 0; k < pts[i].size(); ++k) {
                const double diff = pts[i][k] - pts[j][k];
                d += diff * diff;
            }
            dd[i * n + j] = d;
            dd[j * n + i] = d;
        }
    }
    return dd;
}

} // namespace

GaussianAffinities gaussian_affinities(const std::vector<std::vector<double>>& points,
                                       double perplexity) {
    const size_t n = points.size();
    if (perplexity < 2.0) throw PreconditionError("tsne: perplexity must be >= 2");
    const size_t min_points = static_cast<size_t>(3.0 * perplexity) + 1;
    if (n < min_points)
        throw PreconditionError("tsne: need at least " + std::to_string(min_points) +
                                " points for perplexity " + std::to_string(perplexity) + ", got " +
                                std::to_string(n));
    for (const auto& p : points)
        if (p.size() != points[0].size())
            throw PreconditionError("tsne: inconsistent point dimensions");

    const std::vector<double> dd = squared_distances(points);
    GaussianAffinities aff;
    aff.n = n;
    aff.p.assign(n * n, 0.0);
    aff.beta.assign(n, 1.0);
    const double target_entropy = std::log(perplexity);

#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        double beta = 1.0;
        double beta_min = -std::numeric_limits<double>::infinity();
        double beta_max = std::numeric_limits<double>::infinity();
        double* row = aff.p.data() + static_cast<size_t>(i) * n;
        const double* drow = dd.data() + static_cast<size_t>(i) * n;

        for (int it = 0; it < 200; ++it) {
            double sum = 0.0, dsum = 0.0;
            for (size_t j = 0; j < n; ++j) {
                if (j == static_cast<size_t>(i)) {
                    row[j] = 0.0;
                    continue;
                }
                const double w = std::exp(-beta * drow[j]);
                row[j] = w;
                sum += w;
                dsum += beta * drow[j] * w;
            }
            // entropy H = log(sum) + (beta/sum) * sum_j d_j w_j
            const double entropy = std::log(sum) + dsum / sum;
            const double diff = entropy - target_entropy;
            if (std::fabs(diff) < 1e-7) break;
            if (diff > 0.0) { // too flat: raise beta
                beta_min = beta;
                beta = std::isinf(beta_max) ? beta * 2.0 : (beta + beta_max) / 2.0;
            } else {
                beta_max = beta;
                beta = std::isinf(beta_min) ? beta / 2.0 : (beta + beta_min) / 2.0;
            }
        }
        double sum = 0.0;
        for (size_t j = 0; j < n; ++j) sum += row[j];
        const double inv = 1.0 / sum;
        for (size_t j = 0; j < n; ++j) row[j] *= inv;
        aff.beta[i] = beta;
    }
    return aff;
}

namespace {

double kl_divergence(const std::vector<double>& P, const std::vector<double>& Y, size_t n,
                     int dims) {
    // Q from current embedding
    double sum_q = 0.0;
    std::vector<double> w(n * n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double d = 0.0;
            for (int k = 0; k < dims; ++k) {
                const double diff = Y[i * dims + k] - Y[j * dims + k];
                d += diff * diff;
            }
            const double q = 1.0 / (1.0 + d);
            w[i * n + j] = q;
            w[j * n + i] = q;
            sum_q += 2.0 * q;
        }
    double kl = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double p = P[i * n + j];
            if (p <= 0.0) continue;
            const double q = std::max(w[i * n + j] / sum_q, 1e-12);
            kl += p * std::log(p / q);
        }
    return kl;
}

} // namespace

TsneResult tsne(const std::vector<std::vector<double>>& points, const TsneConfig& cfg) {
    const size_t n = points.size();
    const int dims = cfg.output_dims;
    if (dims < 1) throw PreconditionError("tsne: output_dims must be >= 1");
    GaussianAffinities aff = gaussian_affinities(points, cfg.perplexity);

    // symmetrize and normalize to a joint distribution
    std::vector<double>& P = aff.p;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double s = (P[i * n + j] + P[j * n + i]) / (2.0 * static_cast<double>(n));
            P[i * n + j] = s;
            P[j * n + i] = s;
        }

    for (auto& p : P) p *= cfg.early_exaggeration;

    // Init by a seeded random projection of the input: deterministic per
    // seed, and duplicate inputs start at the same spot, so they stay
    // together by symmetry of the gradient.
    Rng rng(cfg.seed);
    const size_t in_dim = points[0].size();
    std::vector<double> proj(static_cast<size_t>(dims) * in_dim);
    for (auto& r : proj) r = rng.normal();
    std::vector<double> Y(n * dims);
    for (size_t i = 0; i < n; ++i)
        for (int k = 0; k < dims; ++k) {
            double acc = 0.0;
            for (size_t d = 0; d < in_dim; ++d) acc += proj[k * in_dim + d] * points[i][d];
            Y[i * dims + k] = 1e-4 * acc;
        }

    std::vector<double> grad(n * dims, 0.0), velocity(n * dims, 0.0), gains(n * dims, 1.0);
    std::vector<double> w(n * n, 0.0);
    std::vector<double> qpart(n, 0.0);

    TsneResult res;
    res.output_dims = dims;
    double momentum = 0.5;
    bool lying = cfg.early_exaggeration != 1.0;

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        if (iter == cfg.exaggeration_until && lying) {
            for (auto& p : P) p /= cfg.early_exaggeration;
            lying = false;
            res.kl_after_exaggeration = kl_divergence(P, Y, n, dims);
        }
        if (iter == cfg.momentum_switch_at) momentum = 0.8;

        // Student-t weights and normalization
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(n); ++i) {
            double part = 0.0;
            for (size_t j = 0; j < n; ++j) {
                if (j == static_cast<size_t>(i)) {
                    w[i * n + j] = 0.0;
                    continue;
                }
                double d = 0.0;
                for (int k = 0; k < dims; ++k) {
                    const double diff = Y[i * dims + k] - Y[j * dims + k];
                    d += diff * diff;
                }
                const double q = 1.0 / (1.0 + d);
                w[static_cast<size_t>(i) * n + j] = q;
                part += q;
            }
            qpart[i] = part;
        }
        double sum_q = 0.0;
        for (size_t i = 0; i < n; ++i) sum_q += qpart[i]; // fixed order
        if (sum_q <= 0.0) sum_q = 1e-12;

#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(n); ++i) {
            for (int k = 0; k < dims; ++k) grad[i * dims + k] = 0.0;
            for (size_t j = 0; j < n; ++j) {
                if (j == static_cast<size_t>(i)) continue;
                const double wij = w[static_cast<size_t>(i) * n + j];
                const double mult = (P[static_cast<size_t>(i) * n + j] - wij / sum_q) * wij;
                for (int k = 0; k < dims; ++k)
                    grad[i * dims + k] += 4.0 * mult * (Y[i * dims + k] - Y[j * dims + k]);
            }
        }

        for (size_t i = 0; i < n * dims; ++i) {
            const bool same_sign = (grad[i] > 0.0) == (velocity[i] > 0.0);
            gains[i] = same_sign ? gains[i] * 0.8 : gains[i] + 0.2;
            if (gains[i] < 0.1) gains[i] = 0.1;
            velocity[i] = momentum * velocity[i] - cfg.eta * gains[i] * grad[i];
            Y[i] += velocity[i];
        }

        // recentre
        for (int k = 0; k < dims; ++k) {
            double mean = 0.0;
            for (size_t i = 0; i < n; ++i) mean += Y[i * dims + k];
            mean /= static_cast<double>(n);
            for (size_t i = 0; i < n; ++i) Y[i * dims + k] -= mean;
        }
    }

    if (lying) { // iterations ended before the exaggeration phase did
        for (auto& p : P) p /= cfg.early_exaggeration;
        res.kl_after_exaggeration = kl_divergence(P, Y, n, dims);
    }
    res.final_kl = kl_divergence(P, Y, n, dims);
    res.embedding = std::move(Y);
    return res;
}

double silhouette_score(const TsneResult& emb, const std::vector<int>& labels) {
    const int dims = emb.output_dims;
    const size_t n = labels.size();
    if (emb.embedding.size() != n * static_cast<size_t>(dims))
        throw PreconditionError("silhouette: labels/embedding size mismatch");

    auto dist = [&](size_t i, size_t j) {
        double d = 0.0;
        for (int k = 0; k < dims; ++k) {
            const double diff = emb.embedding[i * dims + k] - emb.embedding[j * dims + k];
            d += diff * diff;
        }
        return std::sqrt(d);
    };

    int max_label = 0;
    for (int l : labels) max_label = std::max(max_label, l);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> sum(max_label + 1, 0.0);
        std::vector<int> count(max_label + 1, 0);
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum[labels[j]] += dist(i, j);
            count[labels[j]] += 1;
        }
        const int li = labels[i];
        const double a = count[li] > 0 ? sum[li] / count[li] : 0.0;
        double b = std::numeric_limits<double>::infinity();
        for (int l = 0; l <= max_label; ++l)
            if (l != li && count[l] > 0) b = std::min(b, sum[l] / count[l]);
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

} // namespace mwprec
