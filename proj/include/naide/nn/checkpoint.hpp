#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "naide/nn/mlp.hpp"

namespace naide::nn {

inline constexpr std::string_view kCheckpointFormat = "naide-ckpt-v1";

struct Checkpoint {
    MlpWeights weights;
    // The TrainConfig that produced the weights, stored verbatim.
    nlohmann::json train_config = nlohmann::json::object();
};

// JSON container: {"format", "dims", "activation", "layers": [{"weights", "bias"}], "train_config"}.
// Matrices are flattened row-major. Doubles round-trip exactly.
nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace naide::nn
