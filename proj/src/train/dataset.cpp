#include "naide/train/dataset.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "naide/core/context.hpp"
#include "naide/errors.hpp"
#include "naide/eval/noise.hpp"
#include "naide/rng.hpp"

namespace naide::train {

namespace {
constexpr std::uint64_t kShuffleStream = 0xD15EA5E;
}

SupervisedDataset::SupervisedDataset(int k, std::vector<GrayImage> clean, std::vector<GrayImage> noisy,
                                     std::vector<PixelRef> order)
    : k_(k), clean_(std::move(clean)), noisy_(std::move(noisy)), order_(std::move(order)) {
    validate_context_size(k_);
    if (clean_.size() != noisy_.size()) throw ShapeError("clean/noisy image lists differ in length");
    for (std::size_t i = 0; i < clean_.size(); ++i)
        if (clean_[i].width() != noisy_[i].width() || clean_[i].height() != noisy_[i].height())
            throw ShapeError("clean/noisy pair " + std::to_string(i) + " differs in size");
    for (const PixelRef& ref : order_)
        if (ref.image >= clean_.size() || ref.pixel >= clean_[ref.image].size())
            throw IndexError("sample reference out of range");
}

SupervisedSample SupervisedDataset::sample(std::size_t i) const {
    const PixelRef ref = order_.at(i);
    const GrayImage& noisy = noisy_[ref.image];
    const int row = static_cast<int>(ref.pixel / static_cast<std::uint32_t>(noisy.width()));
    const int col = static_cast<int>(ref.pixel % static_cast<std::uint32_t>(noisy.width()));
    return {clean_[ref.image].pixels()[ref.pixel], noisy.pixels()[ref.pixel], extract_context(noisy, row, col, k_)};
}

void SupervisedDataset::fill_batch(std::span<const std::size_t> indices, Eigen::MatrixXd& contexts,
                                   Eigen::VectorXd& z, Eigen::VectorXd& x) const {
    const auto n = static_cast<Eigen::Index>(indices.size());
    const int width = context_width(k_);
    contexts.resize(width, n);
    z.resize(n);
    x.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const PixelRef ref = order_[indices[static_cast<std::size_t>(j)]];
        const GrayImage& noisy = noisy_[ref.image];
        const int row = static_cast<int>(ref.pixel / static_cast<std::uint32_t>(noisy.width()));
        const int col = static_cast<int>(ref.pixel % static_cast<std::uint32_t>(noisy.width()));
        extract_context(noisy, row, col, k_, std::span<double>(contexts.col(j).data(), static_cast<std::size_t>(width)));
        z(j) = noisy.pixels()[ref.pixel];
        x(j) = clean_[ref.image].pixels()[ref.pixel];
    }
}

SupervisedDataset make_supervised_dataset(std::span<const GrayImage> clean_images, const NoiseSpec& spec, int k,
                                          std::uint64_t seed) {
    validate_context_size(k);
    if (clean_images.empty()) throw ConfigError("supervised dataset needs at least one clean image");

    std::vector<GrayImage> clean(clean_images.begin(), clean_images.end());
    std::vector<GrayImage> noisy;
    std::vector<SupervisedDataset::PixelRef> order;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        noisy.push_back(eval::add_gaussian_noise(clean[i], spec, derive_seed(seed, i)));
        for (std::size_t p = 0; p < clean[i].size(); ++p)
            order.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(p)});
    }
    std::mt19937_64 rng(derive_seed(seed, kShuffleStream));
    std::shuffle(order.begin(), order.end(), rng);
    return SupervisedDataset(k, std::move(clean), std::move(noisy), std::move(order));
}

}  // namespace naide::train
