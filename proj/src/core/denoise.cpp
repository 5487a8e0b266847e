#include "naide/core/denoise.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "naide/core/context.hpp"
#include "naide/core/objectives.hpp"
#include "naide/errors.hpp"

namespace naide {

std::vector<AffineParams> affine_map(const nn::MlpWeights& weights, const GrayImage& noisy, int k) {
    check_network_matches_k(weights, k);
    std::vector<AffineParams> out;
    out.reserve(noisy.size());
    for (std::size_t first = 0; first < noisy.size(); first += kSweepChunk) {
        const std::size_t count = std::min(kSweepChunk, noisy.size() - first);
        const auto params = nn::infer(weights, extract_contexts(noisy, k, first, count));
        for (Eigen::Index j = 0; j < params.cols(); ++j) out.push_back({params(0, j), params(1, j)});
    }
    return out;
}

GrayImage denoise_image(const nn::MlpWeights& weights, const GrayImage& noisy, int k) {
    const std::vector<AffineParams> params = affine_map(weights, noisy, k);
    const auto z = noisy.pixels();
    std::vector<double> out(noisy.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = apply_affine(z[i], params[i]);
    return GrayImage(noisy.width(), noisy.height(), std::move(out), PixelKind::clean);
}

void write_affine_csv(const std::vector<AffineParams>& params, int width, const std::filesystem::path& path) {
    if (width <= 0 || params.size() % static_cast<std::size_t>(width) != 0)
        throw ShapeError("affine map size is not a multiple of the image width");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    out << "row,col,a,b\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto w = static_cast<std::size_t>(width);
        out << fmt::format("{},{},{},{}\n", i / w, i % w, params[i].a, params[i].b);
    }
    if (!out) throw ParseError("failed writing " + path.string());
}

}  // namespace naide
