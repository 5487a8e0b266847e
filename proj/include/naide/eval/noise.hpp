#pragma once

#include <cstdint>

#include "naide/core/image.hpp"

namespace naide::eval {

/// Z = x + N with N i.i.d. Gaussian(0, sigma_norm^2). The result is not clipped.
GrayImage add_gaussian_noise(const GrayImage& clean, const NoiseSpec& spec, std::uint64_t seed);

}  // namespace naide::eval
