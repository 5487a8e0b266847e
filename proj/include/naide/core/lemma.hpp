#pragma once

#include <cstdint>

#include "naide/core/image.hpp"

namespace naide {

struct LemmaCheck {
    double empirical_mean = 0.0;
    double closed_form = 0.0;
    double standard_error = 0.0;  // sample std / sqrt(n)

    // |empirical - closed| in units of the standard error.
    double z_score() const;
    bool within(double standard_errors) const;
};

/// Monte-Carlo expectation of the estimated loss for a fixed affine map
/// applied to Z = x + N, N ~ Gaussian(0, sigma^2), against the closed form
/// ((1 - a) x - b)^2 + (1 + a^2) sigma^2 (true MSE + sigma^2).
LemmaCheck verify_lemma_monte_carlo(double x, double a, double b, const NoiseSpec& spec, std::uint64_t n_samples,
                                    std::uint64_t seed);

// Minimum sample count for a meaningful check.
inline constexpr std::uint64_t kLemmaMinSamples = 1000;

}  // namespace naide
