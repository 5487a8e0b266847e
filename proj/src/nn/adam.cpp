#include "naide/nn/adam.hpp"

#include <cmath>
#include <string>

#include "naide/errors.hpp"

namespace naide::nn {

AdamState AdamState::for_weights(const MlpWeights& weights) {
    AdamState s;
    s.first_moment = Gradients::zeros_like(weights);
    s.second_moment = Gradients::zeros_like(weights);
    return s;
}

namespace {

template <typename Param>
void update(Param& p, const Param& g, Param& m, Param& v, double b1, double b2, double step, double bc2,
            double eps) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    p.array() -= step * m.array() / ((v.array() / bc2).sqrt() + eps);
}

}  // namespace

void adam_step(MlpWeights& weights, const Gradients& grads, AdamState& state, double lr) {
    if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
    const std::size_t layers = weights.layer_count();
    if (grads.matrices.size() != layers || state.first_moment.matrices.size() != layers)
        throw ShapeError("gradient/state layer count does not match weights");
    for (std::size_t l = 0; l < layers; ++l) {
        if (grads.matrices[l].rows() != weights.matrices[l].rows() ||
            grads.matrices[l].cols() != weights.matrices[l].cols() ||
            grads.biases[l].size() != weights.biases[l].size())
            throw ShapeError("gradient shape mismatch at layer " + std::to_string(l));
    }
    if (!grads.all_finite())
        throw TrainingError("non-finite gradient at Adam step " + std::to_string(state.t + 1));

    state.t += 1;
    const double t = static_cast<double>(state.t);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    const double step = lr / bc1;
    for (std::size_t l = 0; l < layers; ++l) {
        update(weights.matrices[l], grads.matrices[l], state.first_moment.matrices[l],
               state.second_moment.matrices[l], state.beta1, state.beta2, step, bc2, state.epsilon);
        update(weights.biases[l], grads.biases[l], state.first_moment.biases[l], state.second_moment.biases[l],
               state.beta1, state.beta2, step, bc2, state.epsilon);
    }
}

}  // namespace naide::nn
