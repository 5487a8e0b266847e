#include "naide/core/image.hpp"

#include <cmath>
#include <string>

#include "naide/errors.hpp"

namespace naide {

GrayImage::GrayImage(int width, int height, std::vector<double> pixels, PixelKind kind)
    : width_(width), height_(height), pixels_(std::move(pixels)), kind_(kind) {
    if (width <= 0 || height <= 0) throw ConfigError("image dimensions must be positive");
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ShapeError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                         std::to_string(width) + "x" + std::to_string(height));
    validate();
}

GrayImage GrayImage::filled(int width, int height, double value, PixelKind kind) {
    if (width <= 0 || height <= 0) throw ConfigError("image dimensions must be positive");
    return GrayImage(width, height,
                     std::vector<double>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), value),
                     kind);
}

void GrayImage::validate() const {
    for (std::size_t i = 0; i < pixels_.size(); ++i) {
        const double v = pixels_[i];
        if (!std::isfinite(v)) throw ConfigError("pixel " + std::to_string(i) + " is not finite");
        if (kind_ == PixelKind::clean && (v < 0.0 || v > 1.0))
            throw ConfigError("clean pixel " + std::to_string(i) + " = " + std::to_string(v) + " outside [0, 1]");
    }
}

NoiseSpec::NoiseSpec(double sigma_in_8bit_units) : sigma_255(sigma_in_8bit_units) {
    if (!(sigma_255 > 0.0) || !std::isfinite(sigma_255)) throw ConfigError("sigma must be positive and finite");
}

NoiseSpec NoiseSpec::from_normalized(double sigma_norm) { return NoiseSpec(sigma_norm * 255.0); }

}  // namespace naide
