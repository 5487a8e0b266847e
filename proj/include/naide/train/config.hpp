#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "naide/nn/mlp.hpp"

namespace naide::train {

enum class StopRule { none, heuristic };

std::string_view to_string(StopRule rule);
StopRule parse_stop_rule(std::string_view name);

/// Training hyperparameters. Defaults follow the full-scale recipe:
/// k = 17, nine hidden layers of 512 units, Adam, learning rate halved every
/// 10 epochs from 1e-4 (supervised) or every 20 epochs from 1e-5 (fine-tune).
struct TrainConfig {
    int k = 17;
    std::vector<int> hidden = std::vector<int>(9, 512);
    nn::Activation activation = nn::Activation::positive;
    int epochs = 50;
    int batch_size = 128;
    double lr0_supervised = 1e-4;
    double lr0_finetune = 1e-5;
    int lr_halve_every_supervised = 10;
    int lr_halve_every_finetune = 20;
    double sigma_255 = 25.0;
    std::uint64_t seed = 0;
    StopRule stop_rule = StopRule::none;

    // [k^2 - 1, hidden..., 2]
    std::vector<int> dims() const;
    void validate() const;
};

/// lr0 * 2^-floor(epoch / halve_every), epoch counted from 0.
double scheduled_lr(double lr0, int halve_every, int epoch);

nlohmann::json to_json(const TrainConfig& config);

/// Overrides fields of `base` with the keys present in `doc`. Unknown keys
/// and wrongly typed values raise ConfigError.
TrainConfig apply_json(TrainConfig base, const nlohmann::json& doc);

}  // namespace naide::train
