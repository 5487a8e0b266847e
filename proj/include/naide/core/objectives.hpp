#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "naide/core/image.hpp"
#include "naide/nn/mlp.hpp"

namespace naide {

/// One labelled training pixel: clean target, noisy center value and the
/// noisy context around it (center excluded, already shifted).
struct SupervisedSample {
    double x = 0.0;
    double z = 0.0;
    std::vector<double> context;
};

// Pixels evaluated per forward pass when sweeping a whole image.
inline constexpr std::size_t kSweepChunk = 2048;

void check_network_matches_k(const nn::MlpWeights& weights, int k);

/// Mean estimated loss over a batch. When `grads` is non-null it receives
/// the gradient of that mean with respect to every network parameter.
double adaptive_batch_loss(const nn::MlpWeights& weights, const Eigen::MatrixXd& contexts, const Eigen::VectorXd& z,
                           double variance_norm, nn::Gradients* grads);

/// Mean of (x - (a z + b))^2 over a batch, unclamped.
double supervised_batch_loss(const nn::MlpWeights& weights, const Eigen::MatrixXd& contexts,
                             const Eigen::VectorXd& z, const Eigen::VectorXd& x, nn::Gradients* grads);

/// Mean estimated loss over every pixel of `noisy`; summed in row-major order.
double adaptive_objective(const nn::MlpWeights& weights, const GrayImage& noisy, const NoiseSpec& spec, int k);

double supervised_objective(const nn::MlpWeights& weights, std::span<const SupervisedSample> samples);

}  // namespace naide
