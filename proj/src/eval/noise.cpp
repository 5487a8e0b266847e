#include "naide/eval/noise.hpp"

#include <random>
#include <vector>

#include "naide/errors.hpp"

namespace naide::eval {

GrayImage add_gaussian_noise(const GrayImage& clean, const NoiseSpec& spec, std::uint64_t seed) {
    if (clean.kind() != PixelKind::clean) throw ConfigError("add_gaussian_noise expects a clean image");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spec.sigma_norm());
    const auto x = clean.pixels();
    std::vector<double> z(x.begin(), x.end());
    for (double& v : z) v += noise(rng);
    return GrayImage(clean.width(), clean.height(), std::move(z), PixelKind::noisy);
}

}  // namespace naide::eval
