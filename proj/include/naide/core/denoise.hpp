#pragma once

#include <filesystem>
#include <vector>

#include "naide/core/estimated_loss.hpp"
#include "naide/core/image.hpp"
#include "naide/nn/mlp.hpp"

namespace naide {

/// Per-pixel (a, b) predicted from each pixel's context, row-major.
std::vector<AffineParams> affine_map(const nn::MlpWeights& weights, const GrayImage& noisy, int k);

/// Applies the per-pixel affine map to the noisy image; output is clean-kind, clamped to [0, 1].
GrayImage denoise_image(const nn::MlpWeights& weights, const GrayImage& noisy, int k);

/// CSV with header "row,col,a,b", one line per pixel in row-major order.
void write_affine_csv(const std::vector<AffineParams>& params, int width, const std::filesystem::path& path);

}  // namespace naide
