#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "naide/nn/mlp.hpp"

namespace naide::nn {

// Evaluates the loss at `weights`; fills `grads` with the analytic gradient when non-null.
using Objective = std::function<double(const MlpWeights& weights, Gradients* grads)>;

struct GradientCheckResult {
    double max_relative_error = 0.0;
    std::size_t worst_index = 0;
    std::size_t checked = 0;
};

/// Compares analytic gradients against central differences,
/// |analytic - numeric| / max(1, |analytic|, |numeric|), on up to
/// `max_params` parameters (all of them when the network is smaller,
/// otherwise a seeded random subset).
GradientCheckResult gradient_check(const MlpWeights& weights, const Objective& loss_fn, double epsilon,
                                   std::size_t max_params = 0, std::uint64_t seed = 0);

}  // namespace naide::nn
