#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mwprec/dataset.hpp"
#include "mwprec/rae.hpp"

namespace mwprec {

struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// First/second moment estimates mirroring the RAE parameter shapes.
struct AdamState {
    struct Layer {
        std::vector<float> m_w, v_w, m_b, v_b;
    };
    std::array<Layer, kRaeLayers> layers;
    uint64_t step_count = 0;
    AdamHyper hyper;

    static AdamState zeros_like(const Rae<float>& net);
};

// One Adam update over every RAE parameter. Rejects non-finite gradients.
void adam_step(Rae<float>& net, const RaeGrads<float>& grads, AdamState& state, double lr);

struct TrainConfig {
    uint64_t total_iterations = 20000;
    uint64_t decay_at = 18000;
    double lr_before = 1e-3;
    double lr_after = 1e-4;
    uint32_t batch_size = 8;
    uint64_t master_seed = 1;
    uint64_t checkpoint_every = 0; // 0: only the final checkpoint
    uint64_t log_every = 100;
    std::string checkpoint_path; // required when checkpointing is enabled

    void validate() const;
};

double lr_at(uint64_t iteration, const TrainConfig& cfg);

struct LossCurves {
    std::vector<uint64_t> iteration;
    std::vector<double> train_loss;
    std::vector<double> val_loss;
};

void save_loss_curves(const std::string& path, const LossCurves& curves);

// Mean MAE loss over a set of examples, parameters frozen.
double dataset_loss(const Rae<float>& net, const Dataset& ds, size_t begin, size_t end);

// Mini-batch Adam training: sample a batch with replacement,
// average loss/gradients, one step; losses logged every log_every iterations
// (training loss is the sampled batch's, validation is the full split); the
// final row holds full train-split and val-split losses after the last step.
// final_state, when given, receives the optimizer moments after the last step.
LossCurves train(Rae<float>& net, const Dataset& ds, const TrainConfig& cfg,
                 AdamState* final_state = nullptr);

// Checkpoint file, little-endian:
//   "MWPC" | version u32 | 9 x [dims u32x3 | weights f32[] | bias f32[]]
//   | iteration u64 | has_adam u8
//   | if has_adam: step_count u64 + 9 x [m_w | m_b | v_w | v_b as f32[]]
inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const Rae<float>& net, const AdamState* state,
                     uint64_t iteration);

struct Checkpoint {
    Rae<float> net = Rae<float>::with_widths({1, 1, 1, 1, 1}); // overwritten on load
    bool has_adam = false;
    AdamState adam;
    uint64_t iteration = 0;
};

Checkpoint load_checkpoint(const std::string& path);

} // namespace mwprec
