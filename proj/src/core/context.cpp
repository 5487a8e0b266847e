#include "naide/core/context.hpp"

#include <string>

#include "naide/errors.hpp"

namespace naide {

void validate_context_size(int k) {
    if (k < 3 || k % 2 == 0) throw ConfigError("context size k must be odd and >= 3, got " + std::to_string(k));
}

int context_size_for_width(int width) {
    int k = 1;
    while (context_width(k) < width) k += 2;
    if (context_width(k) != width || k < 3)
        throw ConfigError("input width " + std::to_string(width) + " is not k*k - 1 for an odd k >= 3");
    return k;
}

int symmetric_index(int i, int n) {
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

namespace {

// Edge-exclusive mirror (... 2 1 | 0 1 ... n-1 | n-2 ...).
int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - m;
}

}  // namespace

void extract_context(const GrayImage& image, int row, int col, int k, std::span<double> out) {
    validate_context_size(k);
    if (!image.contains(row, col))
        throw IndexError("pixel (" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                         std::to_string(image.height()) + "x" + std::to_string(image.width()) + " image");
    if (out.size() != static_cast<std::size_t>(context_width(k))) throw ShapeError("context buffer has wrong length");

    const int h = image.height();
    const int w = image.width();
    const int radius = k / 2;
    const bool interior = row >= radius && col >= radius && row + radius < h && col + radius < w;
    std::size_t pos = 0;
    for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
            if (dr == 0 && dc == 0) continue;
            if (interior) {
                out[pos++] = image.at(row + dr, col + dc) - kContextShift;
                continue;
            }
            int r = symmetric_index(row + dr, h);
            int c = symmetric_index(col + dc, w);
            if (r == row && c == col) {
                r = reflect_index(row + dr, h);
                c = reflect_index(col + dc, w);
            }
            out[pos++] = (r == row && c == col) ? 0.0 : image.at(r, c) - kContextShift;
        }
    }
}

std::vector<double> extract_context(const GrayImage& image, int row, int col, int k) {
    validate_context_size(k);
    std::vector<double> out(static_cast<std::size_t>(context_width(k)));
    extract_context(image, row, col, k, out);
    return out;
}

Eigen::MatrixXd extract_contexts(const GrayImage& image, int k, std::size_t first, std::size_t count) {
    validate_context_size(k);
    if (first + count > image.size()) throw IndexError("pixel range exceeds image");
    const auto width = static_cast<std::size_t>(image.width());
    Eigen::MatrixXd contexts(context_width(k), static_cast<Eigen::Index>(count));
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t p = first + j;
        double* column = contexts.col(static_cast<Eigen::Index>(j)).data();
        extract_context(image, static_cast<int>(p / width), static_cast<int>(p % width), k,
                        std::span<double>(column, static_cast<std::size_t>(context_width(k))));
    }
    return contexts;
}

}  // namespace naide
