#include "mwprec/eval.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "mwprec/errors.hpp"
#include "mwprec/fft.hpp"
#include "mwprec/rng.hpp"

namespace mwprec {

namespace {

template <typename T>
double mse_impl(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size())
        throw PreconditionError("mse: length mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
    if (a.empty()) throw PreconditionError("mse: empty input");
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

FeatureMap<float> to_feature(const std::vector<float>& v) {
    FeatureMap<float> f(1, static_cast<int>(v.size()));
    std::memcpy(f.values.data(), v.data(), v.size() * sizeof(float));
    return f;
}

std::vector<float> recover(const Rae<float>& net, const std::vector<float>& distorted) {
    auto [y, cache] = rae_forward(to_feature(distorted), net);
    return std::vector<float>(y.values.begin(), y.values.end());
}

} // namespace

double mse(const std::vector<float>& a, const std::vector<float>& b) { return mse_impl(a, b); }
double mse(const std::vector<double>& a, const std::vector<double>& b) { return mse_impl(a, b); }

std::optional<double> improvement_db(double mse_before, double mse_after) {
    if (mse_before < 0.0 || mse_after < 0.0)
        throw PreconditionError("improvement_db: negative MSE");
    if (mse_before == 0.0) throw PreconditionError("improvement_db: mse_before is zero");
    if (mse_after == 0.0) return std::nullopt; // unbounded
    return 10.0 * std::log10(mse_before / mse_after);
}

Spectrogram stft(const Waveform& w, int window_len, int hop) {
    if (window_len < 2 || static_cast<size_t>(window_len) > w.size())
        throw PreconditionError("stft: window_len must be in [2, signal length]");
    if (hop < 1) throw PreconditionError("stft: hop must be >= 1");

    const size_t n = next_pow2(static_cast<size_t>(window_len));
    const int frames = static_cast<int>((w.size() - window_len) / hop) + 1;

    Spectrogram s;
    s.window_len = window_len;
    s.hop = hop;
    s.sample_rate = w.sample_rate;
    s.frames.resize(frames);

    std::vector<double> hann(window_len);
    for (int i = 0; i < window_len; ++i)
        hann[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (window_len - 1)));

    std::vector<std::complex<double>> buf;
    for (int f = 0; f < frames; ++f) {
        buf.assign(n, 0.0);
        const size_t off = static_cast<size_t>(f) * hop;
        for (int i = 0; i < window_len; ++i) buf[i] = w.samples[off + i] * hann[i];
        fft(buf, false);
        auto& row = s.frames[f];
        row.resize(n / 2 + 1);
        for (size_t k = 0; k <= n / 2; ++k) row[k] = std::abs(buf[k]);
    }
    return s;
}

void save_spectrogram_csv(const std::string& path, const Spectrogram& s) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    const size_t n = next_pow2(static_cast<size_t>(s.window_len));
    char buf[64];
    for (size_t k = 0; k < s.bins(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(k) * s.sample_rate /
                                                    static_cast<double>(n));
        os << (k ? "," : "") << buf;
    }
    os << "\n";
    for (const auto& row : s.frames) {
        for (size_t k = 0; k < row.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", row[k]);
            os << (k ? "," : "") << buf;
        }
        os << "\n";
    }
}

RecoveryReport evaluate(const Rae<float>& net, const Dataset& ds, size_t begin, size_t end) {
    if (begin >= end || end > ds.examples.size())
        throw PreconditionError("evaluate: bad example range");
    RecoveryReport rep;
    rep.rows.resize(end - begin);

#pragma omp parallel for schedule(static)
    for (long j = 0; j < static_cast<long>(end - begin); ++j) {
        const auto& ex = ds.examples[begin + j];
        const double before = mse(ex.distorted, ex.clean);
        const double after = mse(recover(net, ex.distorted), ex.clean);
        auto& row = rep.rows[j];
        row.index = begin + j;
        row.mse_before = before;
        row.mse_after = after;
        // zero MSE on either side has no finite dB ratio; report the sentinel
        row.improvement_db = (before > 0.0 && after > 0.0) ? improvement_db(before, after)
                                                           : std::nullopt;
    }

    double sb = 0.0, sa = 0.0;
    bool any_zero_after = false;
    for (const auto& r : rep.rows) {
        sb += r.mse_before;
        sa += r.mse_after;
        any_zero_after |= (r.mse_after == 0.0);
    }
    rep.mean_mse_before = sb / static_cast<double>(rep.rows.size());
    rep.mean_mse_after = sa / static_cast<double>(rep.rows.size());
    rep.mean_improvement_db = (!any_zero_after && rep.mean_mse_before > 0.0)
                                  ? improvement_db(rep.mean_mse_before, rep.mean_mse_after)
                                  : std::nullopt;
    return rep;
}

RecoveryReport evaluate_validation(const Rae<float>& net, const Dataset& ds) {
    if (ds.val_count() == 0) throw PreconditionError("evaluate: empty validation split");
    return evaluate(net, ds, ds.train_count(), ds.examples.size());
}

void save_report_csv(const std::string& path, const RecoveryReport& report) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << "index,mse_before,mse_after,improvement_db\n";
    char buf[160];
    for (const auto& r : report.rows) {
        if (r.improvement_db)
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", r.index, r.mse_before,
                          r.mse_after, *r.improvement_db);
        else
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,unbounded\n", r.index, r.mse_before,
                          r.mse_after);
        os << buf;
    }
}

std::vector<double> default_awgn_levels() {
    // 10 logarithmic steps from 1e-3 to 0.3 (signal peak is 0.9)
    std::vector<double> v(10);
    const double lo = std::log10(1e-3), hi = std::log10(0.3);
    for (int i = 0; i < 10; ++i) v[i] = std::pow(10.0, lo + (hi - lo) * i / 9.0);
    return v;
}

std::vector<SweepPoint> noise_sweep(const Rae<float>& net, const Dataset& ds,
                                    const ChannelModel& model, double native_noise_rms,
                                    const SweepConfig& sweep) {
    if (ds.val_count() == 0) throw PreconditionError("noise_sweep: empty validation split");
    model.validate();
    const size_t begin = ds.train_count(), end = ds.examples.size();
    const size_t n = end - begin;
    const auto levels = sweep.awgn_levels.empty() ? default_awgn_levels() : sweep.awgn_levels;

    std::vector<SweepPoint> points;
    std::vector<double> befores(n), afters(n);

    auto mean_point = [&](const std::string& kind, double level) {
        double mb = 0.0, ma = 0.0;
        for (size_t j = 0; j < n; ++j) {
            mb += befores[j];
            ma += afters[j];
        }
        points.push_back({kind, level, mb / static_cast<double>(n), ma / static_cast<double>(n)});
    };

    // (a) synthetic AWGN on the stored distorted inputs
    for (size_t li = 0; li < levels.size(); ++li) {
        const double rms = levels[li];
#pragma omp parallel for schedule(static)
        for (long j = 0; j < static_cast<long>(n); ++j) {
            const auto& ex = ds.examples[begin + j];
            Rng rng(derive_seed(sweep.rng_seed, li * 1000003ULL + static_cast<uint64_t>(j)));
            std::vector<float> noisy = ex.distorted;
            if (rms > 0.0)
                for (auto& x : noisy) x = static_cast<float>(x + rms * rng.normal());
            befores[j] = mse(noisy, ex.clean);
            afters[j] = mse(recover(net, noisy), ex.clean);
        }
        mean_point("awgn", rms);
    }

    // (b) re-acquired at each averaging count with the native per-shot noise;
    // the stored clean waveform regenerates the deterministic channel output
    for (size_t ci = 0; ci < sweep.avg_counts.size(); ++ci) {
        const int avg = sweep.avg_counts[ci];
        if (avg < 1) throw PreconditionError("noise_sweep: avg_count must be >= 1");
#pragma omp parallel for schedule(static)
        for (long j = 0; j < static_cast<long>(n); ++j) {
            const auto& ex = ds.examples[begin + j];
            Waveform clean;
            clean.sample_rate = ds.sample_rate;
            clean.samples.assign(ex.clean.begin(), ex.clean.end());
            AcquisitionConfig a;
            a.noise_rms = native_noise_rms;
            a.avg_count = avg;
            a.rng_seed = derive_seed(sweep.rng_seed ^ 0x61766721ULL,
                                     ci * 1000003ULL + static_cast<uint64_t>(j));
            const Waveform re = acquire(apply_channel(clean, model), a);
            std::vector<float> distorted(re.samples.begin(), re.samples.end());
            befores[j] = mse(distorted, ex.clean);
            afters[j] = mse(recover(net, distorted), ex.clean);
        }
        mean_point("avg", static_cast<double>(avg));
    }
    return points;
}

void save_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << "noise_kind,level,mse_before,mse_after\n";
    char buf[160];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", p.noise_kind.c_str(), p.level,
                      p.mse_before, p.mse_after);
        os << buf;
    }
}

} // namespace mwprec
