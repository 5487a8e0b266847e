#include "naide/core/lemma.hpp"

#include <cmath>
#include <random>

#include "naide/core/estimated_loss.hpp"
#include "naide/errors.hpp"

namespace naide {

double LemmaCheck::z_score() const {
    const double diff = std::abs(empirical_mean - closed_form);
    if (standard_error == 0.0) return diff == 0.0 ? 0.0 : HUGE_VAL;
    return diff / standard_error;
}

bool LemmaCheck::within(double standard_errors) const { return z_score() <= standard_errors; }

LemmaCheck verify_lemma_monte_carlo(double x, double a, double b, const NoiseSpec& spec, std::uint64_t n_samples,
                                    std::uint64_t seed) {
    if (n_samples < 2) throw ConfigError("need at least 2 samples");
    const double sigma = spec.sigma_norm();
    const double variance = spec.variance_norm();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    // Welford accumulation.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double z = x + noise(rng);
        const double loss = estimated_loss(z, a, b, variance);
        const double delta = loss - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (loss - mean);
    }
    const double n = static_cast<double>(n_samples);
    const double sample_var = m2 / (n - 1.0);

    LemmaCheck out;
    out.empirical_mean = mean;
    const double bias = (1.0 - a) * x - b;
    out.closed_form = bias * bias + (1.0 + a * a) * variance;
    out.standard_error = std::sqrt(sample_var / n);
    return out;
}

}  // namespace naide
