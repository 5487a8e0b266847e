#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "naide/eval/metrics.hpp"
#include "naide/nn/mlp.hpp"
#include "naide/train/config.hpp"

namespace naide::eval {

struct SuiteOptions {
    std::uint64_t master_seed = 0;
    // When set, each image is fine-tuned on its own noisy version before denoising.
    std::optional<train::TrainConfig> fine_tune;
};

struct NamedImage {
    std::string name;
    GrayImage image;
};

/// Corrupt -> (fine-tune) -> denoise -> PSNR for each image. Image i gets
/// noise seed derive_seed(master_seed, i).
MetricReport evaluate_images(const std::vector<NamedImage>& clean, const nn::MlpWeights& weights,
                             const NoiseSpec& spec, int k, const SuiteOptions& options = {});

/// Runs evaluate_images over every .pgm/.ngf file in `clean_dir`, sorted by
/// file name. Unreadable files are skipped with a warning on stderr; throws
/// ParseError if none can be read.
MetricReport evaluate_suite(const std::filesystem::path& clean_dir, const nn::MlpWeights& weights,
                            const NoiseSpec& spec, int k, const SuiteOptions& options = {});

}  // namespace naide::eval
