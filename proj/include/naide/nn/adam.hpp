#pragma once

#include <cstdint>

#include "naide/nn/mlp.hpp"

namespace naide::nn {

struct AdamState {
    Gradients first_moment;
    Gradients second_moment;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_weights(const MlpWeights& weights);
};

/// One bias-corrected Adam update, in place. Throws TrainingError on
/// non-finite gradients (weights and state are left untouched).
void adam_step(MlpWeights& weights, const Gradients& grads, AdamState& state, double lr);

}  // namespace naide::nn
