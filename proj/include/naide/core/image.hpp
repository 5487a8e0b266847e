#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace naide {

enum class PixelKind { clean, noisy };

/// Row-major grayscale image on the normalized scale (1.0 = intensity 255).
/// Clean images are confined to [0, 1]; noisy ones may be any finite real.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::vector<double> pixels, PixelKind kind);
    static GrayImage filled(int width, int height, double value, PixelKind kind);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    PixelKind kind() const { return kind_; }

    double at(int row, int col) const { return pixels_[index(row, col)]; }
    double& at(int row, int col) { return pixels_[index(row, col)]; }
    std::span<const double> pixels() const { return pixels_; }
    std::span<double> pixels() { return pixels_; }

    bool contains(int row, int col) const { return row >= 0 && col >= 0 && row < height_ && col < width_; }

    // Re-checks the kind invariant after in-place edits.
    void validate() const;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> pixels_;
    PixelKind kind_ = PixelKind::clean;
};

/// Additive noise level. Configured in 8-bit units, used normalized.
struct NoiseSpec {
    double sigma_255 = 25.0;

    explicit NoiseSpec(double sigma_in_8bit_units);
    static NoiseSpec from_normalized(double sigma_norm);

    double sigma_norm() const { return sigma_255 / 255.0; }
    double variance_norm() const { return sigma_norm() * sigma_norm(); }
};

}  // namespace naide
