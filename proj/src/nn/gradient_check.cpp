#include "naide/nn/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "naide/errors.hpp"

namespace naide::nn {

GradientCheckResult gradient_check(const MlpWeights& weights, const Objective& loss_fn, double epsilon,
                                   std::size_t max_params, std::uint64_t seed) {
    if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) throw ConfigError("finite-difference step must lie in [1e-7, 1e-3]");

    Gradients analytic = Gradients::zeros_like(weights);
    loss_fn(weights, &analytic);

    const std::size_t total = weights.parameter_count();
    std::vector<std::size_t> indices(total);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    if (max_params != 0 && max_params < total) {
        std::mt19937_64 rng(seed);
        std::shuffle(indices.begin(), indices.end(), rng);
        indices.resize(max_params);
        std::sort(indices.begin(), indices.end());
    }

    GradientCheckResult result;
    MlpWeights probe = weights;
    for (std::size_t index : indices) {
        const double original = probe.parameter(index);
        probe.parameter(index) = original + epsilon;
        const double plus = loss_fn(probe, nullptr);
        probe.parameter(index) = original - epsilon;
        const double minus = loss_fn(probe, nullptr);
        probe.parameter(index) = original;

        const double numeric = (plus - minus) / (2.0 * epsilon);
        const double exact = analytic.parameter(index);
        const double err = std::abs(exact - numeric) / std::max({1.0, std::abs(exact), std::abs(numeric)});
        if (err > result.max_relative_error || !std::isfinite(err)) {
            result.max_relative_error = std::isfinite(err) ? err : HUGE_VAL;
            result.worst_index = index;
        }
        ++result.checked;
    }
    return result;
}

}  // namespace naide::nn
