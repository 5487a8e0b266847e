#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "naide/core/image.hpp"
#include "naide/nn/mlp.hpp"
#include "naide/train/config.hpp"
#include "naide/train/dataset.hpp"

namespace naide::train {

enum class StopReason { epoch_budget, heuristic };
std::string_view to_string(StopReason reason);

struct EpochRecord {
    int epoch = 0;           // 1-based count of completed epochs
    double objective = 0.0;  // full-data objective after the epoch
    double lr = 0.0;         // rate used during the epoch
    double seconds = 0.0;    // wall clock
    std::size_t steps = 0;   // optimizer updates in the epoch
};

struct TrainReport {
    double initial_objective = 0.0;  // full-data objective before the first update
    std::vector<EpochRecord> epochs;
    StopReason stop_reason = StopReason::epoch_budget;

    double final_objective() const { return epochs.empty() ? initial_objective : epochs.back().objective; }
};

/// CSV "epoch,objective,lr,steps", one row per completed epoch. Timing is
/// left out so that reports are byte-reproducible.
void write_report_csv(const TrainReport& report, const std::filesystem::path& path);

struct TrainResult {
    nn::MlpWeights weights;
    TrainReport report;
};

struct FineTuneResult {
    nn::MlpWeights weights;       // weights when training stopped
    nn::MlpWeights best_weights;  // lowest full-image objective seen, including the starting point
    double best_objective = 0.0;
    int best_epoch = 0;  // 0 = the starting weights
    TrainReport report;
};

/// Minimizes the supervised squared error over `dataset` with mini-batch
/// Adam from a fresh He initialization (seeded by config.seed).
TrainResult train_supervised(const SupervisedDataset& dataset, const TrainConfig& config);

/// Minimizes the mean estimated loss of a single noisy image from a fresh
/// initialization. Uses the supervised learning-rate schedule.
TrainResult adaptive_train_from_scratch(const GrayImage& noisy, const NoiseSpec& spec, const TrainConfig& config);

/// Continues training `weights` on the estimated loss of `noisy` with the
/// fine-tuning schedule. With StopRule::heuristic, stops at the first epoch
/// whose full-image objective drops below sigma_norm^2.
FineTuneResult fine_tune(const nn::MlpWeights& weights, const GrayImage& noisy, const NoiseSpec& spec,
                         const TrainConfig& config);

}  // namespace naide::train
